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

#include "gaitdyn/landmark.hpp"

#include "gaitdyn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace gaitdyn::landmark {

double sample_variance(const std::vector<std::size_t>& values) {
    if (values.size() < 2) return kUndefinedVariance;
    double mean = 0.0;
    for (auto v : values) mean += static_cast<double>(v);
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (auto v : values) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
    return ss / static_cast<double>(values.size() - 1);
}

const StateRuns* RunStatistics::find(const State& s) const {
    const auto it = std::lower_bound(states.begin(), states.end(), s, [](const StateRuns& r, const State& v) { return r.state < v; });
    return it != states.end() && it->state == s ? &*it : nullptr;
}

RunStatistics run_statistics(const l1g2::CoupledStateSequence& seq) {
    const std::size_t n = seq.length();
    if (n < 2) throw PreconditionError(fmt::format("run statistics need at least 2 states, got {}", n));

    struct Raw {
        std::size_t start, size;
        State state;
    };
    std::vector<Raw> raw;
    for (std::size_t t = 0; t < n; ++t) {
        const auto s = seq.state(t);
        if (!raw.empty() && std::equal(s.begin(), s.end(), raw.back().state.begin(), raw.back().state.end())) {
            ++raw.back().size;
        } else {
            raw.push_back({t, 1, State(s.begin(), s.end())});
        }
    }

    std::map<State, std::size_t> index;
    for (const auto& r : raw) index.emplace(r.state, 0);
    RunStatistics stats;
    stats.length = n;
    for (auto& [state, i] : index) {
        i = stats.states.size();
        stats.states.push_back({state, {}, {}, {}, kUndefinedVariance, kUndefinedVariance});
    }
    for (const auto& r : raw) {
        const auto i = index.at(r.state);
        auto& sr = stats.states[i];
        if (!sr.starts.empty()) sr.recurrences.push_back(r.start - sr.starts.back());
        sr.starts.push_back(r.start);
        sr.sizes.push_back(r.size);
        stats.runs.push_back({i, r.start, r.size});
    }
    for (auto& sr : stats.states) {
        sr.size_variance = sample_variance(sr.sizes);
        sr.recurrence_variance = sample_variance(sr.recurrences);
    }
    return stats;
}

std::vector<State> expand_runs(const RunStatistics& stats) {
    std::vector<State> out;
    out.reserve(stats.length);
    for (const auto& r : stats.runs) out.insert(out.end(), r.size, stats.states[r.state].state);
    return out;
}

double landmark_objective(const StateRuns& runs, double recurrence_weight) {
    return runs.size_variance + recurrence_weight * runs.recurrence_variance;
}

State select_landmark(const RunStatistics& stats, std::size_t min_runs, double recurrence_weight) {
    if (!(recurrence_weight >= 0.0)) throw ConfigError("recurrence weight must be >= 0");
    const StateRuns* best = nullptr;
    double best_obj = 0.0;
    for (const auto& sr : stats.states) {
        if (sr.run_count() < min_runs || sr.run_count() < 2) continue;
        const double obj = landmark_objective(sr, recurrence_weight);
        // states are visited in lexicographic order, so strict comparisons keep the smaller one
        if (!best || obj < best_obj || (obj == best_obj && sr.run_count() > best->run_count())) {
            best = &sr;
            best_obj = obj;
        }
    }
    if (!best) throw PreconditionError(fmt::format("no state has {} or more runs", std::max<std::size_t>(min_runs, 2)));
    return best->state;
}

std::vector<std::size_t> CyclePartition::lengths() const {
    std::vector<std::size_t> out;
    for (const auto& c : cycles) out.push_back(c.length());
    return out;
}

CyclePartition partition_cycles(const l1g2::CoupledStateSequence& seq, const State& landmark) {
    if (landmark.size() != seq.arity()) {
        throw PreconditionError(fmt::format("landmark has {} components, states have {}", landmark.size(), seq.arity()));
    }
    CyclePartition p;
    p.landmark = landmark;
    const auto is_landmark = [&](std::size_t t) {
        const auto s = seq.state(t);
        return std::equal(s.begin(), s.end(), landmark.begin(), landmark.end());
    };
    for (std::size_t t = 0; t < seq.length(); ++t) {
        if (is_landmark(t) && (t == 0 || !is_landmark(t - 1))) p.boundaries.push_back(t);
    }
    if (p.boundaries.size() < 2) {
        throw PreconditionError(fmt::format("landmark {} starts {} run(s); at least 2 are needed", l1g2::state_label(landmark),
                                            p.boundaries.size()));
    }
    for (std::size_t i = 1; i < p.boundaries.size(); ++i) p.cycles.push_back({p.boundaries[i - 1], p.boundaries[i]});
    p.head = p.boundaries.front();
    p.tail = seq.length() - p.boundaries.back();

    const auto len = p.lengths();
    double sum = 0.0;
    for (auto l : len) sum += static_cast<double>(l);
    p.period_mean = sum / static_cast<double>(len.size());
    const double var = sample_variance(len);
    p.period_sd = std::isinf(var) ? 0.0 : std::sqrt(var);
    return p;
}

std::string cycle_table_csv(const CyclePartition& partition) {
    std::string out = "cycle,start,length\n";
    for (std::size_t i = 0; i < partition.cycles.size(); ++i) {
        out += fmt::format("{},{},{}\n", i + 1, partition.cycles[i].start, partition.cycles[i].length());
    }
    return out;
}

}  // namespace gaitdyn::landmark
