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

#include "gaitdyn/l1g2.hpp"

#include "gaitdyn/error.hpp"
#include "gaitdyn/textio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cstring>

namespace gaitdyn::l1g2 {

namespace {

bool has_space(const std::string& s) {
    return s.empty() || std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string window_digest(const SensorTriplet& t, std::size_t begin, std::size_t end) {
    std::string bytes;
    bytes.reserve(3 * (end - begin) * sizeof(double));
    for (std::size_t r = 0; r < 3; ++r) {
        const auto row = t.values().row(r).subspan(begin, end - begin);
        bytes.append(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double));
    }
    return sha256_hex(bytes);
}

}  // namespace

Matrix stack_triplets(std::span<const SensorTriplet> sources) {
    if (sources.empty()) throw PreconditionError("nothing to stack");
    std::size_t total = 0;
    for (const auto& s : sources) total += s.length();
    Matrix out(3, total);
    std::size_t offset = 0;
    for (const auto& s : sources) {
        for (std::size_t r = 0; r < 3; ++r) {
            const auto row = s.values().row(r);
            std::copy(row.begin(), row.end(), out.row(r).begin() + static_cast<std::ptrdiff_t>(offset));
        }
        offset += s.length();
    }
    return out;
}

Matrix stack_lr(const SensorTriplet& left, const SensorTriplet& right) {
    if (left.length() != right.length()) {
        throw DataError(fmt::format("left has {} samples, right has {}", left.length(), right.length()));
    }
    // SensorTriplet already guarantees X, Y, Z row order.
    const SensorTriplet both[] = {left, right};
    return stack_triplets(both);
}

LocalCode fit_local_code(std::span<const SensorTriplet> sources, std::size_t clusters, const std::string& label,
                         std::size_t window_begin, std::size_t window_end, const hca::ClusterOptions& options) {
    if (sources.empty()) throw PreconditionError("a local code needs at least one source sensor");
    if (has_space(label)) throw ConfigError(fmt::format("subsystem label '{}' must be a nonempty word", label));
    if (window_begin >= window_end) throw ConfigError(fmt::format("empty fit window [{}, {})", window_begin, window_end));

    LocalCode code;
    code.label = label;
    code.window_begin = window_begin;
    code.window_end = window_end;
    std::vector<SensorTriplet> windows;
    for (const auto& s : sources) {
        if (s.length() < window_end) {
            throw PreconditionError(fmt::format("sensor {} has {} samples; the fit window ends at {}", s.sensor(), s.length(), window_end));
        }
        if (std::find(code.source_sensors.begin(), code.source_sensors.end(), s.sensor()) != code.source_sensors.end()) {
            throw ConfigError(fmt::format("sensor {} listed twice in one subsystem", s.sensor()));
        }
        code.source_sensors.push_back(s.sensor());
        code.source_digests.push_back(window_digest(s, window_begin, window_end));
        windows.emplace_back(s.frame().slice(window_begin, window_end));
    }
    code.clustering = hca::cluster_columns(stack_triplets(windows), clusters, options);
    return code;
}

LocalCode fit_local_code(std::span<const SensorTriplet> sources, std::size_t clusters, const std::string& label,
                         const hca::ClusterOptions& options) {
    if (sources.empty()) throw PreconditionError("a local code needs at least one source sensor");
    std::size_t shortest = sources.front().length();
    for (const auto& s : sources) shortest = std::min(shortest, s.length());
    return fit_local_code(sources, clusters, label, 0, shortest, options);
}

SymbolSequence encode_subsystem(const LocalCode& code, const SensorTriplet& triplet) {
    auto labels = hca::assign_nearest(code.clustering, triplet.values());
    const auto it = std::find(code.source_sensors.begin(), code.source_sensors.end(), triplet.sensor());
    if (it != code.source_sensors.end() && triplet.length() >= code.window_end) {
        const auto k = static_cast<std::size_t>(it - code.source_sensors.begin());
        if (window_digest(triplet, code.window_begin, code.window_end) == code.source_digests[k]) {
            const auto fit = code.clustering.assignments.begin() + static_cast<std::ptrdiff_t>(k * code.window_length());
            std::copy(fit, fit + static_cast<std::ptrdiff_t>(code.window_length()),
                      labels.begin() + static_cast<std::ptrdiff_t>(code.window_begin));
        }
    }
    return {std::move(labels), static_cast<std::uint32_t>(code.clusters()), Provenance::HcaCluster};
}

CoupledStateSequence::CoupledStateSequence(std::vector<std::uint32_t> codes, std::vector<std::string> labels,
                                           std::vector<std::uint32_t> alphabets)
    : codes_(std::move(codes)), labels_(std::move(labels)), alphabets_(std::move(alphabets)) {
    if (labels_.empty()) throw PreconditionError("coupled sequence needs at least one component");
    if (alphabets_.size() != labels_.size()) throw PreconditionError("one alphabet size per component is required");
    if (codes_.size() % labels_.size() != 0) throw DataError("code count is not a multiple of the arity");
    for (std::size_t i = 0; i < codes_.size(); ++i) {
        if (codes_[i] >= alphabets_[i % labels_.size()]) {
            throw DataError(fmt::format("code {} at t={} exceeds the alphabet of {}", codes_[i], i / labels_.size(),
                                        labels_[i % labels_.size()]));
        }
    }
}

SymbolSequence CoupledStateSequence::projection(std::size_t j) const {
    if (j >= arity()) throw PreconditionError(fmt::format("component {} of a {}-tuple", j, arity()));
    std::vector<std::uint32_t> out(length());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = codes_[t * arity() + j];
    return {std::move(out), alphabets_[j], Provenance::HcaCluster};
}

CoupledStateSequence CoupledStateSequence::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > length()) throw PreconditionError(fmt::format("slice [{}, {}) of {} states", begin, end, length()));
    return {{codes_.begin() + static_cast<std::ptrdiff_t>(begin * arity()), codes_.begin() + static_cast<std::ptrdiff_t>(end * arity())},
            labels_,
            alphabets_};
}

CoupledStateSequence couple(std::span<const SymbolSequence> seqs, std::vector<std::string> labels) {
    if (seqs.empty()) throw PreconditionError("nothing to couple");
    if (labels.size() != seqs.size()) throw PreconditionError("one label per coupled sequence is required");
    const std::size_t n = seqs.front().size();
    std::vector<std::uint32_t> alphabets;
    for (const auto& s : seqs) {
        if (s.size() != n) throw PreconditionError(fmt::format("coupled sequences differ in length ({} vs {})", n, s.size()));
        alphabets.push_back(s.alphabet_size());
    }
    std::vector<std::uint32_t> codes(n * seqs.size());
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t j = 0; j < seqs.size(); ++j) codes[t * seqs.size() + j] = seqs[j][t];
    return {std::move(codes), std::move(labels), std::move(alphabets)};
}

std::string state_label(std::span<const std::uint32_t> state) {
    std::string out;
    for (std::size_t j = 0; j < state.size(); ++j) {
        if (j) out += '.';
        out += std::to_string(state[j]);
    }
    return out;
}

std::vector<std::uint32_t> parse_state_label(const std::string& label) {
    std::vector<std::uint32_t> out;
    for (const auto& part : split(label, '.')) {
        const auto v = parse_int(part);
        if (!v || *v < 0) throw ConfigError(fmt::format("bad state label '{}'", label));
        out.push_back(static_cast<std::uint32_t>(*v));
    }
    return out;
}

namespace {
constexpr const char* kMagic = "gaitdyn-codebook";
constexpr int kVersion = 1;
constexpr const char* kClusteringMarker = "\nclustering\n";
}  // namespace

std::string serialize(const LocalCode& code) {
    std::string out = fmt::format("{} {}\nlabel {}\nsources {}", kMagic, kVersion, code.label, code.source_sensors.size());
    for (const auto& s : code.source_sensors) out += ' ' + s;
    out += fmt::format("\nwindow {} {}\n", code.window_begin, code.window_end);
    for (std::size_t k = 0; k < code.source_sensors.size(); ++k) {
        out += fmt::format("digest {} {}\n", code.source_sensors[k], code.source_digests[k]);
    }
    out += "clustering\n";
    out += hca::serialize(code.clustering);
    return out;
}

LocalCode deserialize_local_code(const std::string& text, const std::string& source) {
    const auto cut = text.find(kClusteringMarker);
    LineReader in(cut == std::string::npos ? text : text.substr(0, cut), source);
    const auto magic = in.next_fields();
    if (magic.size() != 2 || magic[0] != kMagic) in.fail("not a code book file");
    if (to_int(magic[1], in) != kVersion) in.fail(fmt::format("unsupported code book version {}", magic[1]));
    if (cut == std::string::npos) in.fail("missing clustering section");

    LocalCode code;
    const auto label = in.expect("label");
    if (label.size() != 1) in.fail("'label' takes one word");
    code.label = label[0];
    const auto src = in.expect("sources");
    if (src.empty() || static_cast<std::size_t>(to_int(src[0], in)) != src.size() - 1 || src.size() < 2) {
        in.fail("source count does not match the listed sensors");
    }
    code.source_sensors.assign(src.begin() + 1, src.end());
    const auto win = in.expect("window");
    if (win.size() != 2) in.fail("'window' takes begin and end");
    code.window_begin = static_cast<std::size_t>(to_int(win[0], in));
    code.window_end = static_cast<std::size_t>(to_int(win[1], in));
    if (code.window_begin >= code.window_end) in.fail("empty window");
    for (const auto& s : code.source_sensors) {
        const auto d = in.expect("digest");
        if (d.size() != 2 || d[0] != s) in.fail(fmt::format("expected the digest of {}", s));
        code.source_digests.push_back(d[1]);
    }
    if (!in.done()) in.fail("unexpected content before the clustering section");
    code.clustering = hca::deserialize_clustering(text.substr(cut + std::strlen(kClusteringMarker)), source);
    if (code.clustering.assignments.size() != code.window_length() * code.source_sensors.size()) {
        throw DataError(fmt::format("{}: clustering covers {} columns, the window implies {}", source,
                                    code.clustering.assignments.size(), code.window_length() * code.source_sensors.size()));
    }
    return code;
}

std::string code_book_id(const LocalCode& code) { return sha256_hex(serialize(code)).substr(0, 16); }

}  // namespace gaitdyn::l1g2
