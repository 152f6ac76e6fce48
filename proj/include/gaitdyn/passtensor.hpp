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

// Cycles resampled onto a common angular grid and stacked into a
// cycles x rings x bins tensor of cluster codes, plus comparison and
// ring/cylinder rendering.

#include "gaitdyn/l1g2.hpp"
#include "gaitdyn/landmark.hpp"
#include "gaitdyn/svg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gaitdyn::passtensor {

inline constexpr std::size_t kDefaultBins = 128;
inline constexpr std::size_t kMinBins = 8;

/// Sample offset read by bin b of a cycle of `length` samples: the sample
/// under the bin centre, floor((2b + 1) * length / (2 * bins)).
std::size_t bin_sample(std::size_t b, std::size_t length, std::size_t bins);

/// rings x bins, row-major.
struct CodeGrid {
    std::size_t rings = 0;
    std::size_t bins = 0;
    std::vector<std::uint32_t> codes;

    std::uint32_t at(std::size_t r, std::size_t b) const { return codes[r * bins + b]; }

    friend bool operator==(const CodeGrid&, const CodeGrid&) = default;
};

CodeGrid normalize_cycle(const l1g2::CoupledStateSequence& seq, const landmark::Cycle& cycle, std::size_t bins);

/// 1-based inclusive cycle numbers.
struct CycleRange {
    std::size_t first = 1;
    std::size_t last = 1;
};

/// Cycles 3..70, clipped to what is available.
inline constexpr CycleRange kReferenceCycleRange{3, 70};

struct Passtensor {
    std::size_t cycles = 0;
    std::size_t rings = 0;
    std::size_t bins = 0;
    std::vector<std::uint32_t> tensor;  ///< cycle-major, then ring, then bin
    std::vector<std::string> ring_labels;
    std::vector<std::uint32_t> ring_alphabets;
    std::vector<std::size_t> raw_lengths;
    std::vector<std::size_t> cycle_starts;
    std::size_t first_cycle = 1;  ///< number of the first stacked cycle in the partition
    landmark::State landmark_state;
    std::string code_book_id;

    std::uint32_t at(std::size_t c, std::size_t r, std::size_t b) const { return tensor[(c * rings + r) * bins + b]; }
    std::uint32_t& at(std::size_t c, std::size_t r, std::size_t b) { return tensor[(c * rings + r) * bins + b]; }
    CodeGrid grid(std::size_t c) const;

    friend bool operator==(const Passtensor&, const Passtensor&) = default;
};

/// Stacks every cycle of the partition, or only `range` when given.
Passtensor build_passtensor(const l1g2::CoupledStateSequence& seq, const landmark::CyclePartition& partition,
                            std::size_t bins = kDefaultBins, std::optional<CycleRange> range = std::nullopt,
                            const std::string& code_book_id = "");

/// Modal code per (ring, bin) over cycles; ties go to the smaller code.
CodeGrid skeleton(const Passtensor& pt);

struct CompareWeights {
    double skeleton = 0.7;
    double stochastic = 0.3;
};

struct SkeletonMismatch {
    std::size_t ring = 0;
    std::size_t bin = 0;
    std::uint32_t code_a = 0;
    std::uint32_t code_b = 0;
};

struct PasstensorDiff {
    std::vector<double> ring_agreement;  ///< share of bins whose skeleton codes agree, per ring
    double skeleton_agreement = 1.0;
    double stochastic_agreement = 1.0;   ///< 1 - mean total-variation distance of per-cell code histograms
    std::vector<double> cycle_profile_a; ///< each cycle of a against the skeleton of b
    std::vector<double> cycle_profile_b;
    std::vector<SkeletonMismatch> mismatches;
    double distance = 0.0;
};

/// Refuses tensors from different code books, ring layouts or bin counts.
PasstensorDiff compare_passtensors(const Passtensor& a, const Passtensor& b, const CompareWeights& weights = {});

/// Accept threshold: the `level` quantile of genuine-vs-genuine distances.
double calibrate_threshold(std::vector<double> genuine_distances, double level = 0.95);

/// Text form: header, one line per (cycle, ring), then the raw lengths.
std::string serialize(const Passtensor& pt);
Passtensor deserialize_passtensor(const std::string& text, const std::string& source = "<passtensor>");

/// Human-readable comparison report; numbers use fixed precision.
std::string diff_report(const PasstensorDiff& diff, const Passtensor& a, const Passtensor& b);

/// Concentric rings, outer ring first, phase 0 at nine o'clock, clockwise.
std::string render_rings(const CodeGrid& grid, const svg::Palette& palette, const std::vector<std::string>& labels = {},
                         const std::string& title = "");

enum class CylinderView { Unrolled, Isometric };

CylinderView parse_view(const std::string& name);

std::string render_cylinder(const Passtensor& pt, const svg::Palette& palette, CylinderView view, const std::string& title = "");

}  // namespace gaitdyn::passtensor
