/*
 * Copyright 2026 The gaitdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "gaitdyn/frame.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gaitdyn::ingest {

/// Numeric table read from a delimiter-separated text file.
struct DelimitedTable {
    std::vector<std::string> header;
    std::vector<std::string> comments;  ///< '#' lines, without the leading '#'
    Matrix columns;                     ///< header.size() rows x sample-count columns
};

/// Reads a text table with one header row and numeric data rows.
///
/// The delimiter is detected from the header line: comma when it contains a
/// comma, otherwise any run of spaces/tabs. Lines starting with '#' are kept
/// as comments. Blank lines are ignored. Any non-numeric cell or ragged row is
/// a DataError naming the 1-based file line and the column.
DelimitedTable read_delimited(const std::filesystem::path& path);

/// Maps (sensor, axis) channels to accepted header spellings.
struct ColumnAlias {
    std::string sensor;
    Axis axis;
    std::vector<std::string> names;
};

/// Column map for one dataset file layout. New layouts are new tables.
struct DatasetLayout {
    std::string name;
    double sample_rate_hz;
    std::vector<std::string> sensors;  ///< valid sensor names in canonical order
    std::vector<ColumnAlias> columns;
};

/// Single-file MAREA layout: columns `<sensor>_accX` (or `<sensor>_X`).
const DatasetLayout& marea_combined_layout();
/// Per-sensor MAREA files (`Sub<id>_<sensor>.txt`) with columns accX, accY, accZ.
const DatasetLayout& marea_sensor_file_layout();
/// HuGaDB v1 text layout: columns `acc_<rf|rs|rt|lf|ls|lt>_<x|y|z>`.
const DatasetLayout& hugadb_layout();

/// Extracts `sensors` (in that order, then X, Y, Z) from a table using a layout.
TimeSeriesFrame frame_from_table(const DelimitedTable& table, const DatasetLayout& layout,
                                 const std::vector<std::string>& sensors, std::string subject_id,
                                 std::string activity, const std::string& source);

/// Loads MAREA accelerometer data.
///
/// `path` is either one combined file, or a subject directory holding
/// `Sub<subject_id>_<sensor>.txt` files. Sensors must be drawn from
/// {LF, RF, Waist, Wrist}; rows come out ordered by `sensors`, then X, Y, Z.
TimeSeriesFrame load_marea(const std::filesystem::path& path, const std::string& subject_id,
                           const std::vector<std::string>& sensors);

/// Loads the 18 accelerometer channels of a HuGaDB recording; gyroscope and
/// EMG columns are ignored.
TimeSeriesFrame load_hugadb(const std::filesystem::path& path, const std::string& subject_id);

/// HuGaDB sensor names in output order.
const std::vector<std::string>& hugadb_sensors();

/// Loads a fixture file whose header names channels `<sensor>_<X|Y|Z>`.
/// A `# sample_rate_hz=<v>` comment overrides `default_rate`.
TimeSeriesFrame load_fixture(const std::filesystem::path& path, const std::string& subject_id = {},
                             double default_rate = 128.0);

/// Fixture-format text of a frame.
std::string fixture_text(const TimeSeriesFrame& frame);

/// Writes a frame in the fixture format; load_fixture reads it back exactly.
void write_fixture(const std::filesystem::path& path, const TimeSeriesFrame& frame);

struct WalkerOptions {
    std::uint64_t seed = 1;
    std::size_t cycles = 50;
    double period_mean = 128.0;
    double period_jitter = 0.0;
    std::size_t sensors = 2;
    double noise_sd = 0.02;
    /// Extra samples after the last full cycle (start of one more cycle).
    std::size_t tail = 8;
};

struct SyntheticWalk {
    TimeSeriesFrame frame;
    /// Cycle start indices followed by T; consecutive pairs partition [0, T).
    /// The final piece is the lead-out tail when `tail` > 0.
    std::vector<std::size_t> boundaries;
    std::vector<std::size_t> cycle_lengths;  ///< lengths of the full cycles only
};

/// Deterministic multi-sensor walker with rhythmic structure.
///
/// Sensor 0 ("LF") carries a fixed-width heel-strike impulse at the start of
/// every cycle and swings during the last 40% of a nominal period. Sensor 1
/// ("RF") swings for the same fixed length starting at 10% of the period.
/// Body sensors are smooth waveforms stretched over each cycle. Cycle
/// lengths are round(period_mean + period_jitter * u) with u uniform on [-1, 1].
SyntheticWalk synthesize_walker(const WalkerOptions& options);

}  // namespace gaitdyn::ingest
