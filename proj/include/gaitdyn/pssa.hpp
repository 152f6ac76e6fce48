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

// Principle system-state analysis: rank pooled ternary system states, keep
// the most frequent ones and identify subjects from the share of time each
// segment spends in them.

#include "gaitdyn/symbolic.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gaitdyn::pssa {

/// One D-dimensional ternary state, letters in {1, 2, 3}.
using State = std::vector<std::uint8_t>;

/// "1-3-2" style label.
std::string state_label(const State& s);

/// Distinct states ranked by frequency (descending), ties by the tuple.
struct SystemStateTable {
    std::size_t dims = 0;
    std::vector<State> states;
    std::vector<std::size_t> frequencies;  ///< parallel to states
    std::size_t pool_size = 0;             ///< time points counted

    std::size_t distinct() const noexcept { return states.size(); }
};

SystemStateTable build_state_table(std::span<const symbolic::StateVectorSequence> seqs);

enum class CoverageDenominator {
    PoolSize,        ///< share of all pooled time points; reaches 1
    DistinctStates,  ///< the literal count-of-states divisor, kept for comparison
};

/// r(k) for k = 1..N: cumulative frequency of the top-k states over the denominator.
std::vector<double> coverage_curve(const SystemStateTable& table,
                                   CoverageDenominator denominator = CoverageDenominator::PoolSize);

/// Smallest N* whose coverage reaches `target` (pool-size denominator).
std::size_t pss_count_for_coverage(const SystemStateTable& table, double target);

/// The first `count` states of the table.
std::vector<State> principle_states(const SystemStateTable& table, std::size_t count);

/// Non-overlapping segments of length l; the trailing remainder is dropped.
/// Entry j of a vector is the share of the segment spent in pss[j].
std::vector<std::vector<double>> segment_proportions(const symbolic::StateVectorSequence& seq,
                                                     std::span<const State> pss, std::size_t segment_length);

struct SegmentRow {
    std::string subject_id;
    std::size_t segment_index = 0;
    std::vector<double> proportions;

    friend bool operator==(const SegmentRow&, const SegmentRow&) = default;
};

/// The m x N* segment-by-state proportion matrix.
struct ProportionMatrix {
    std::vector<State> pss;
    std::size_t segment_length = 0;
    std::vector<SegmentRow> rows;

    /// Subject ids in order of first appearance.
    std::vector<std::string> subjects() const;

    friend bool operator==(const ProportionMatrix&, const ProportionMatrix&) = default;
};

struct LabelledSequence {
    std::string subject_id;
    symbolic::StateVectorSequence states;
};

ProportionMatrix build_proportion_matrix(std::span<const LabelledSequence> subjects, std::span<const State> pss,
                                         std::size_t segment_length);

/// Even segment indices train, odd ones test.
std::pair<ProportionMatrix, ProportionMatrix> split_alternating(const ProportionMatrix& sigma);

struct SubjectKey {
    std::string subject_id;
    std::vector<std::size_t> key_states;  ///< column indices into the PSS list
    double threshold = 0.0;               ///< summed key share must exceed this
    double margin = 0.0;                  ///< own minimum minus others' maximum on training rows
    std::vector<double> centroid;         ///< mean proportion vector, used by the fallback

    friend bool operator==(const SubjectKey&, const SubjectKey&) = default;
};

struct KeyPssModel {
    std::size_t pss_count = 0;
    std::vector<SubjectKey> subjects;
    double training_accuracy = 0.0;

    friend bool operator==(const KeyPssModel&, const KeyPssModel&) = default;
};

/// Greedy forward selection, per subject, of key states maximizing the
/// one-vs-rest margin of summed proportions. Selection stops once the margin
/// is positive or after `max_keys` states; the threshold is the margin midpoint.
KeyPssModel train_key_pss(const ProportionMatrix& sigma, std::size_t max_keys = 10);

struct SubjectScore {
    std::string subject_id;
    double key_share = 0.0;
    double threshold = 0.0;
    double relative_margin = 0.0;  ///< (key_share - threshold) / threshold
    bool fires = false;
};

struct Classification {
    std::string subject_id;
    bool fallback = false;  ///< no key rule fired; nearest centroid decided
    std::vector<SubjectScore> scores;
};

Classification classify_segment(const KeyPssModel& model, std::span<const double> proportions);

/// Fraction of rows whose predicted subject equals the row label.
double accuracy(const KeyPssModel& model, const ProportionMatrix& sigma);

struct SigmaOrder {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> columns;
};

/// Dendrogram leaf orders of rows and columns (average linkage, Euclidean).
SigmaOrder cluster_sigma(const ProportionMatrix& sigma);

/// Everything needed to classify new recordings.
struct PssaModel {
    symbolic::TernaryCoding coding;
    std::vector<State> pss;
    std::size_t segment_length = 0;
    KeyPssModel keys;
};

std::string serialize(const PssaModel& model);
PssaModel deserialize_pssa_model(const std::string& text, const std::string& source = "<pssa model>");

/// Delimiter-separated export: `subject,segment,<state label>...`.
std::string sigma_to_csv(const ProportionMatrix& sigma);

}  // namespace gaitdyn::pssa
