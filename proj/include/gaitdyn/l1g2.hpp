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

// Local-first, global-second coding. Each subsystem (both feet together, or
// one body sensor) gets its own cluster code book over X/Y/Z columns; the
// per-sensor code sequences are then coupled position-wise.

#include "gaitdyn/complexity.hpp"
#include "gaitdyn/frame.hpp"
#include "gaitdyn/hca.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gaitdyn::l1g2 {

/// 3 x 2T: the left columns, then the right ones.
Matrix stack_lr(const SensorTriplet& left, const SensorTriplet& right);

/// 3 x (sum of lengths), sources in order.
Matrix stack_triplets(std::span<const SensorTriplet> sources);

inline constexpr std::size_t kDefaultFeetClusters = 10;
inline constexpr std::size_t kDefaultBodyClusters = 8;

struct LocalCode {
    std::string label;                        ///< subsystem name, e.g. "feet"
    hca::ColumnClustering clustering;
    std::vector<std::string> source_sensors;  ///< stacking order
    std::size_t window_begin = 0;             ///< fit range within each source recording
    std::size_t window_end = 0;
    std::vector<std::string> source_digests;  ///< content hash of each fitted window

    std::size_t clusters() const noexcept { return clustering.clusters; }
    std::size_t window_length() const noexcept { return window_end - window_begin; }

    friend bool operator==(const LocalCode&, const LocalCode&) = default;
};

/// Clusters the stacked columns of `sources` restricted to [begin, end).
/// Every source must be long enough and carry a distinct sensor name.
LocalCode fit_local_code(std::span<const SensorTriplet> sources, std::size_t clusters, const std::string& label,
                         std::size_t window_begin, std::size_t window_end, const hca::ClusterOptions& options = {});

/// Whole-recording window.
LocalCode fit_local_code(std::span<const SensorTriplet> sources, std::size_t clusters, const std::string& label,
                         const hca::ClusterOptions& options = {});

/// Codes for every column of `triplet`. When the triplet is one of the
/// fitted sources with unchanged data, columns inside the window keep their
/// fit labels; everything else goes to the nearest centroid.
SymbolSequence encode_subsystem(const LocalCode& code, const SensorTriplet& triplet);

/// Position-wise tuples of cluster ids, time-major.
class CoupledStateSequence {
public:
    CoupledStateSequence() = default;
    CoupledStateSequence(std::vector<std::uint32_t> codes, std::vector<std::string> labels,
                         std::vector<std::uint32_t> alphabets);

    std::size_t arity() const noexcept { return labels_.size(); }
    std::size_t length() const noexcept { return arity() ? codes_.size() / arity() : 0; }
    std::span<const std::uint32_t> state(std::size_t t) const { return {codes_.data() + t * arity(), arity()}; }
    std::span<const std::uint32_t> codes() const noexcept { return codes_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<std::uint32_t>& alphabets() const noexcept { return alphabets_; }

    /// Component j over time.
    SymbolSequence projection(std::size_t j) const;

    /// Columns [begin, end).
    CoupledStateSequence slice(std::size_t begin, std::size_t end) const;

    friend bool operator==(const CoupledStateSequence&, const CoupledStateSequence&) = default;

private:
    std::vector<std::uint32_t> codes_;
    std::vector<std::string> labels_;
    std::vector<std::uint32_t> alphabets_;
};

CoupledStateSequence couple(std::span<const SymbolSequence> seqs, std::vector<std::string> labels);

/// "3.7" style label for a tuple.
std::string state_label(std::span<const std::uint32_t> state);
std::vector<std::uint32_t> parse_state_label(const std::string& label);

/// Code book file: a short header, then the clustering record.
std::string serialize(const LocalCode& code);
LocalCode deserialize_local_code(const std::string& text, const std::string& source = "<code book>");

/// First 16 hex digits of the SHA-256 of the serialized code book.
std::string code_book_id(const LocalCode& code);

}  // namespace gaitdyn::l1g2
