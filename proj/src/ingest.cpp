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

#include "gaitdyn/ingest.hpp"

#include "gaitdyn/error.hpp"
#include "gaitdyn/textio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace gaitdyn::ingest {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_line(const std::string& line, bool comma) {
    std::vector<std::string> cells;
    if (comma) {
        std::string cell;
        for (char ch : line) {
            if (ch == ',') {
                cells.push_back(trim(cell));
                cell.clear();
            } else {
                cell.push_back(ch);
            }
        }
        cells.push_back(trim(cell));
        return cells;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        cells.push_back(line.substr(i, j - i));
        i = j;
    }
    return cells;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

}  // namespace

DelimitedTable read_delimited(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open {}", path.string()));

    DelimitedTable table;
    std::vector<std::vector<double>> cols;
    bool comma = false;
    bool have_header = false;
    std::size_t samples = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        if (line.front() == '#') {
            table.comments.push_back(trim(line.substr(1)));
            continue;
        }
        if (!have_header) {
            comma = line.find(',') != std::string::npos;
            table.header = split_line(line, comma);
            cols.resize(table.header.size());
            have_header = true;
            continue;
        }
        const auto cells = split_line(line, comma);
        if (cells.size() != table.header.size()) {
            throw DataError(fmt::format("{}:{}: expected {} columns, found {}", path.string(), line_no,
                                        table.header.size(), cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_double(cells[c]);
            if (!v || !std::isfinite(*v)) {
                throw DataError(fmt::format("{}:{}: column {} ('{}'): non-numeric value '{}'", path.string(),
                                            line_no, c + 1, table.header[c], cells[c]));
            }
            cols[c].push_back(*v);
        }
        ++samples;
    }
    if (!have_header) throw DataError(fmt::format("{}: no header row", path.string()));
    if (samples == 0) throw DataError(fmt::format("{}: no data rows", path.string()));

    std::vector<double> flat;
    flat.reserve(cols.size() * samples);
    for (auto& c : cols) flat.insert(flat.end(), c.begin(), c.end());
    table.columns = Matrix(cols.size(), samples, std::move(flat));
    return table;
}

namespace {

std::vector<ColumnAlias> aliases_for(const std::vector<std::string>& sensors,
                                     std::vector<std::string> (*names)(const std::string&, Axis)) {
    std::vector<ColumnAlias> out;
    for (const auto& s : sensors) {
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) out.push_back({s, a, names(s, a)});
    }
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const std::vector<std::string> kMareaSensors = {"LF", "RF", "Waist", "Wrist"};

}  // namespace

const DatasetLayout& marea_combined_layout() {
    static const DatasetLayout layout{
        "marea-combined", 128.0, kMareaSensors,
        aliases_for(kMareaSensors, [](const std::string& s, Axis a) {
            const char ax = axis_name(a);
            return std::vector<std::string>{fmt::format("{}_acc{}", s, ax), fmt::format("{}_{}", s, ax)};
        })};
    return layout;
}

const DatasetLayout& marea_sensor_file_layout() {
    // Each file carries one sensor; the sensor name is filled in per file.
    static const DatasetLayout layout{
        "marea-sensor-file", 128.0, {"*"},
        aliases_for({"*"}, [](const std::string&, Axis a) {
            const char ax = axis_name(a);
            return std::vector<std::string>{fmt::format("acc{}", ax), std::string(1, ax)};
        })};
    return layout;
}

const std::vector<std::string>& hugadb_sensors() {
    static const std::vector<std::string> sensors = {"RF", "RS", "RT", "LF", "LS", "LT"};
    return sensors;
}

const DatasetLayout& hugadb_layout() {
    // HuGaDB samples at roughly 60 Hz; the files do not record it.
    static const DatasetLayout layout{
        "hugadb-v1", 60.0, hugadb_sensors(),
        aliases_for(hugadb_sensors(), [](const std::string& s, Axis a) {
            return std::vector<std::string>{fmt::format("acc_{}_{}", lower(s), static_cast<char>(std::tolower(axis_name(a))))};
        })};
    return layout;
}

TimeSeriesFrame frame_from_table(const DelimitedTable& table, const DatasetLayout& layout,
                                 const std::vector<std::string>& sensors, std::string subject_id,
                                 std::string activity, const std::string& source) {
    if (sensors.empty()) throw ConfigError("no sensors requested");
    std::vector<Channel> channels;
    std::vector<std::size_t> source_cols;
    for (const auto& s : sensors) {
        if (std::find(layout.sensors.begin(), layout.sensors.end(), s) == layout.sensors.end()) {
            throw ConfigError(fmt::format("unknown sensor '{}' for layout {}", s, layout.name));
        }
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
            const auto alias = std::find_if(layout.columns.begin(), layout.columns.end(), [&](const ColumnAlias& c) {
                return (c.sensor == s || c.sensor == "*") && c.axis == a;
            });
            std::size_t found = table.header.size();
            if (alias != layout.columns.end()) {
                for (const auto& name : alias->names) {
                    const auto it = std::find(table.header.begin(), table.header.end(), name);
                    if (it != table.header.end()) {
                        found = static_cast<std::size_t>(it - table.header.begin());
                        break;
                    }
                }
            }
            if (found == table.header.size()) {
                throw DataError(fmt::format("{}: missing accelerometer column for {}_{}", source, s, axis_name(a)));
            }
            channels.push_back({s, a});
            source_cols.push_back(found);
        }
    }
    Matrix values(channels.size(), table.columns.cols());
    for (std::size_t r = 0; r < channels.size(); ++r) {
        const auto src = table.columns.row(source_cols[r]);
        std::copy(src.begin(), src.end(), values.row(r).begin());
    }
    return TimeSeriesFrame(std::move(values), std::move(channels), layout.sample_rate_hz, std::move(subject_id),
                           std::move(activity));
}

TimeSeriesFrame load_marea(const fs::path& path, const std::string& subject_id, const std::vector<std::string>& sensors) {
    for (const auto& s : sensors) {
        if (std::find(kMareaSensors.begin(), kMareaSensors.end(), s) == kMareaSensors.end()) {
            throw ConfigError(fmt::format("unknown MAREA sensor '{}' (expected LF, RF, Waist or Wrist)", s));
        }
    }
    if (!fs::exists(path)) throw DataError(fmt::format("missing file {}", path.string()));
    if (!fs::is_directory(path)) {
        return frame_from_table(read_delimited(path), marea_combined_layout(), sensors, subject_id, "", path.string());
    }

    std::vector<Matrix> parts;
    std::size_t samples = 0;
    for (const auto& s : sensors) {
        const fs::path file = path / fmt::format("Sub{}_{}.txt", subject_id, s);
        if (!fs::exists(file)) throw DataError(fmt::format("missing file {}", file.string()));
        const auto table = read_delimited(file);
        auto frame = frame_from_table(table, marea_sensor_file_layout(), {"*"}, subject_id, "", file.string());
        if (!parts.empty() && frame.length() != samples) {
            throw DataError(fmt::format("{}: {} samples, other sensors have {}", file.string(), frame.length(), samples));
        }
        samples = frame.length();
        parts.push_back(frame.values());
    }
    if (parts.empty()) throw ConfigError("no sensors requested");
    std::vector<double> flat;
    std::vector<Channel> channels;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        flat.insert(flat.end(), parts[i].data().begin(), parts[i].data().end());
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) channels.push_back({sensors[i], a});
    }
    Matrix values(channels.size(), samples, std::move(flat));
    return TimeSeriesFrame(std::move(values), std::move(channels), 128.0, subject_id);
}

TimeSeriesFrame load_hugadb(const fs::path& path, const std::string& subject_id) {
    if (!fs::exists(path)) throw DataError(fmt::format("missing file {}", path.string()));
    const auto table = read_delimited(path);
    std::string activity;
    for (const auto& c : table.comments) {
        if (c.rfind("Activity", 0) == 0 && c.find("ID") == std::string::npos) {
            activity = trim(c.substr(std::string("Activity").size()));
        }
    }
    return frame_from_table(table, hugadb_layout(), hugadb_sensors(), subject_id, activity, path.string());
}

TimeSeriesFrame load_fixture(const fs::path& path, const std::string& subject_id, double default_rate) {
    if (!fs::exists(path)) throw DataError(fmt::format("missing file {}", path.string()));
    const auto table = read_delimited(path);
    double rate = default_rate;
    std::string activity;
    for (const auto& c : table.comments) {
        if (c.rfind("sample_rate_hz=", 0) == 0) {
            const auto v = parse_double(c.substr(15));
            if (!v) throw DataError(fmt::format("{}: bad sample_rate_hz comment", path.string()));
            rate = *v;
        } else if (c.rfind("activity=", 0) == 0) {
            activity = c.substr(9);
        }
    }
    std::vector<Channel> channels;
    for (const auto& name : table.header) {
        const auto us = name.rfind('_');
        if (us == std::string::npos || us + 2 != name.size()) {
            throw DataError(fmt::format("{}: header '{}' is not <sensor>_<X|Y|Z>", path.string(), name));
        }
        const char ax = static_cast<char>(std::toupper(static_cast<unsigned char>(name.back())));
        if (ax != 'X' && ax != 'Y' && ax != 'Z') {
            throw DataError(fmt::format("{}: header '{}' has no X/Y/Z axis", path.string(), name));
        }
        channels.push_back({name.substr(0, us), ax == 'X' ? Axis::X : ax == 'Y' ? Axis::Y : Axis::Z});
    }
    return TimeSeriesFrame(table.columns, std::move(channels), rate, subject_id, activity);
}

std::string fixture_text(const TimeSeriesFrame& frame) {
    std::string out = fmt::format("# sample_rate_hz={}\n", format_double(frame.sample_rate_hz()));
    if (!frame.activity().empty()) out += fmt::format("# activity={}\n", frame.activity());
    for (std::size_t d = 0; d < frame.dims(); ++d) {
        if (d) out += ',';
        out += fmt::format("{}_{}", frame.channels()[d].sensor, axis_name(frame.channels()[d].axis));
    }
    out += '\n';
    for (std::size_t t = 0; t < frame.length(); ++t) {
        for (std::size_t d = 0; d < frame.dims(); ++d) {
            if (d) out += ',';
            out += format_double(frame.values()(d, t));
        }
        out += '\n';
    }
    return out;
}

void write_fixture(const fs::path& path, const TimeSeriesFrame& frame) { write_text_file(path, fixture_text(frame)); }

namespace {

// Bit-exact across standard libraries, unlike std::*_distribution.
class WalkerRng {
public:
    explicit WalkerRng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

constexpr std::size_t kImpulseWidth = 6;

std::string walker_sensor_name(std::size_t s) {
    static const char* names[] = {"LF", "RF", "Waist", "Wrist"};
    return s < 4 ? names[s] : fmt::format("S{}", s);
}

// Foot acceleration: a fixed-length swing bump, flat stance otherwise. Only
// the stance absorbs period changes, as in real walking.
void foot(std::size_t k, std::size_t swing_begin, std::size_t swing_len, double out[3]) {
    constexpr double pi = std::numbers::pi;
    if (k >= swing_begin && k < swing_begin + swing_len) {
        const double u = (static_cast<double>(k - swing_begin) + 0.5) / static_cast<double>(swing_len);
        const double s = std::sin(pi * u);
        out[0] = 0.1 + 1.5 * s;
        out[1] = 1.0 - 0.8 * std::sin(2.0 * pi * u);
        out[2] = 0.6 * s * s - 0.3 * std::sin(2.0 * pi * u);
    } else {
        out[0] = 0.1;
        out[1] = 1.0;
        out[2] = 0.0;
    }
}

void waist(double phase, double out[3]) {
    const double w = 2.0 * std::numbers::pi * 2.0 * phase;
    out[0] = 0.3 * std::sin(w);
    out[1] = 1.0 + 0.2 * std::cos(w);
    out[2] = 0.1 * std::sin(2.0 * w);
}

void wrist(double phase, double out[3]) {
    const double w = 2.0 * std::numbers::pi * phase;
    out[0] = 0.5 * std::sin(w + 0.5 * std::numbers::pi);
    out[1] = 1.0 + 0.1 * std::cos(w);
    out[2] = 0.2 * std::sin(w);
}

}  // namespace

SyntheticWalk synthesize_walker(const WalkerOptions& o) {
    if (!(o.period_mean > 0.0)) throw ConfigError("period_mean must be positive");
    if (o.cycles < 1) throw ConfigError("cycles must be >= 1");
    if (o.period_jitter < 0.0 || !(o.period_jitter < o.period_mean / 4.0)) {
        throw ConfigError("period_jitter must be in [0, period_mean / 4)");
    }
    if (o.sensors < 1) throw ConfigError("sensors must be >= 1");
    if (o.noise_sd < 0.0) throw ConfigError("noise_sd must be nonnegative");

    WalkerRng rng(o.seed);
    const auto swing = static_cast<std::size_t>(std::lround(0.4 * o.period_mean));
    const auto rf_swing_begin = static_cast<std::size_t>(std::lround(0.1 * o.period_mean));
    // Swing onsets wander by up to `step` samples relative to the heel strike.
    const auto step = static_cast<std::ptrdiff_t>(std::lround(o.period_jitter / 2.0));
    const auto draw_step = [&] {
        const auto k = static_cast<std::ptrdiff_t>(rng.uniform01() * static_cast<double>(2 * step + 1));
        return std::min(k, 2 * step) - step;
    };
    std::vector<std::size_t> lengths;
    std::vector<std::size_t> lf_swing_begin;
    std::vector<std::size_t> rf_begin;
    for (std::size_t c = 0; c <= o.cycles; ++c) {
        const double u = 2.0 * rng.uniform01() - 1.0;
        const auto lf_shift = draw_step();
        const auto rf_shift = draw_step();
        auto len = static_cast<std::size_t>(std::lround(o.period_mean + o.period_jitter * u));
        len = std::max(len, std::max(kImpulseWidth, rf_swing_begin) + swing + 2 * static_cast<std::size_t>(step) + 1);
        lengths.push_back(len);
        lf_swing_begin.push_back(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(len - swing) + lf_shift));
        rf_begin.push_back(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(rf_swing_begin + static_cast<std::size_t>(step)) + rf_shift));
    }
    std::vector<std::size_t> boundaries{0};
    for (std::size_t c = 0; c < o.cycles; ++c) boundaries.push_back(boundaries.back() + lengths[c]);
    const std::size_t tail = std::min(o.tail, lengths.back());
    if (tail > 0) boundaries.push_back(boundaries.back() + tail);
    const std::size_t T = boundaries.back();

    Matrix values(3 * o.sensors, T);
    std::vector<Channel> channels;
    for (std::size_t s = 0; s < o.sensors; ++s) {
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) channels.push_back({walker_sensor_name(s), a});
    }
    for (std::size_t c = 0; c + 1 < boundaries.size(); ++c) {
        const std::size_t start = boundaries[c];
        const std::size_t len = lengths[c];
        for (std::size_t t = start; t < boundaries[c + 1]; ++t) {
            const double phase = static_cast<double>(t - start) / static_cast<double>(len);
            for (std::size_t s = 0; s < o.sensors; ++s) {
                double v[3];
                if (s == 0) {
                    foot(t - start, lf_swing_begin[c], swing, v);
                } else if (s == 1) {
                    foot(t - start, rf_begin[c], swing, v);
                } else if (s == 2) {
                    waist(phase, v);
                } else {
                    wrist(std::fmod(phase + 0.137 * static_cast<double>(s - 3), 1.0), v);
                }
                if (s == 0 && t - start < kImpulseWidth) {
                    v[0] += 4.0;
                    v[2] -= 3.0;
                }
                for (std::size_t k = 0; k < 3; ++k) values(3 * s + k, t) = v[k];
            }
        }
    }
    if (o.noise_sd > 0.0) {
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t r = 0; r < values.rows(); ++r) values(r, t) += o.noise_sd * rng.normal();
        }
    }

    std::vector<std::size_t> cycle_lengths(lengths.begin(), lengths.begin() + static_cast<std::ptrdiff_t>(o.cycles));
    return {TimeSeriesFrame(std::move(values), std::move(channels), 128.0, fmt::format("synthetic-{}", o.seed), "walk"),
            std::move(boundaries), std::move(cycle_lengths)};
}

}  // namespace gaitdyn::ingest
