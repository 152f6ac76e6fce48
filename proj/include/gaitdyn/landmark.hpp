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

// Run statistics over a coupled state sequence, the landmark state whose runs
// are most regular, and the cycle partition it induces.

#include "gaitdyn/l1g2.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace gaitdyn::landmark {

using State = std::vector<std::uint32_t>;

/// Variance of fewer than two values.
inline constexpr double kUndefinedVariance = std::numeric_limits<double>::infinity();

/// Sample variance (n - 1 divisor); kUndefinedVariance below two values.
double sample_variance(const std::vector<std::size_t>& values);

struct Run {
    std::size_t state = 0;  ///< index into RunStatistics::states
    std::size_t start = 0;
    std::size_t size = 0;
};

struct StateRuns {
    State state;
    std::vector<std::size_t> starts;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> recurrences;  ///< gaps between successive run starts
    double size_variance = kUndefinedVariance;
    double recurrence_variance = kUndefinedVariance;

    std::size_t run_count() const noexcept { return starts.size(); }
};

struct RunStatistics {
    std::size_t length = 0;
    std::vector<StateRuns> states;  ///< ordered by state value
    std::vector<Run> runs;          ///< in time order

    const StateRuns* find(const State& s) const;
};

RunStatistics run_statistics(const l1g2::CoupledStateSequence& seq);

/// Inverse of the run-length encoding.
std::vector<State> expand_runs(const RunStatistics& stats);

/// size variance + weight * recurrence variance
double landmark_objective(const StateRuns& runs, double recurrence_weight = 1.0);

inline constexpr std::size_t kDefaultMinRuns = 5;

/// Smallest objective among states with at least `min_runs` runs; ties go to
/// more runs, then the lexicographically smaller state.
State select_landmark(const RunStatistics& stats, std::size_t min_runs = kDefaultMinRuns, double recurrence_weight = 1.0);

struct Cycle {
    std::size_t start = 0;
    std::size_t end = 0;  ///< exclusive

    std::size_t length() const noexcept { return end - start; }
    friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct CyclePartition {
    State landmark;
    std::vector<std::size_t> boundaries;  ///< run starts of the landmark
    std::vector<Cycle> cycles;
    double period_mean = 0.0;
    double period_sd = 0.0;  ///< sample standard deviation; 0 for one cycle
    std::size_t head = 0;    ///< samples before the first boundary
    std::size_t tail = 0;    ///< samples from the last boundary on

    std::vector<std::size_t> lengths() const;
};

CyclePartition partition_cycles(const l1g2::CoupledStateSequence& seq, const State& landmark);

/// `cycle,start,length` rows, one per cycle, numbered from 1.
std::string cycle_table_csv(const CyclePartition& partition);

}  // namespace gaitdyn::landmark
