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

#include "gaitdyn/pssa.hpp"

#include "gaitdyn/error.hpp"
#include "gaitdyn/hca.hpp"
#include "gaitdyn/textio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace gaitdyn::pssa {

namespace {

std::string key_of(std::span<const std::uint8_t> s) { return std::string(s.begin(), s.end()); }

}  // namespace

std::string state_label(const State& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += '-';
        out += static_cast<char>('0' + s[i]);
    }
    return out;
}

SystemStateTable build_state_table(std::span<const symbolic::StateVectorSequence> seqs) {
    if (seqs.empty()) throw PreconditionError("state table needs at least one sequence");
    const std::size_t dims = seqs.front().dims();
    std::unordered_map<std::string, std::size_t> counts;
    std::size_t pool = 0;
    for (const auto& seq : seqs) {
        if (seq.dims() != dims) throw DataError(fmt::format("state sequences mix dimensions {} and {}", dims, seq.dims()));
        for (std::size_t t = 0; t < seq.length(); ++t) ++counts[key_of(seq.state(t))];
        pool += seq.length();
    }
    if (pool == 0) throw PreconditionError("state table over empty sequences");

    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    SystemStateTable table;
    table.dims = dims;
    table.pool_size = pool;
    for (auto& [key, count] : ranked) {
        table.states.emplace_back(key.begin(), key.end());
        table.frequencies.push_back(count);
    }
    return table;
}

std::vector<double> coverage_curve(const SystemStateTable& table, CoverageDenominator denominator) {
    const double denom = static_cast<double>(denominator == CoverageDenominator::PoolSize ? table.pool_size : table.distinct());
    std::vector<double> r;
    r.reserve(table.distinct());
    std::size_t cumulative = 0;
    for (auto f : table.frequencies) {
        cumulative += f;
        r.push_back(static_cast<double>(cumulative) / denom);
    }
    return r;
}

std::size_t pss_count_for_coverage(const SystemStateTable& table, double target) {
    if (!(target > 0.0 && target <= 1.0)) throw ConfigError(fmt::format("coverage target {} outside (0, 1]", target));
    const auto r = coverage_curve(table);
    // Integer comparison avoids a rounding miss at exactly r = target.
    std::size_t cumulative = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        cumulative += table.frequencies[i];
        if (static_cast<double>(cumulative) >= target * static_cast<double>(table.pool_size)) return i + 1;
    }
    return r.size();
}

std::vector<State> principle_states(const SystemStateTable& table, std::size_t count) {
    if (count < 1 || count > table.distinct()) {
        throw PreconditionError(fmt::format("cannot select {} principle states from {} distinct states", count, table.distinct()));
    }
    return {table.states.begin(), table.states.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::vector<std::vector<double>> segment_proportions(const symbolic::StateVectorSequence& seq, std::span<const State> pss,
                                                     std::size_t segment_length) {
    if (segment_length < 1) throw ConfigError("segment length must be >= 1");
    if (seq.length() < segment_length) {
        throw PreconditionError(fmt::format("sequence of {} samples is shorter than one segment ({})", seq.length(), segment_length));
    }
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t j = 0; j < pss.size(); ++j) {
        if (pss[j].size() != seq.dims()) throw DataError("principle state dimension differs from the sequence");
        column.emplace(key_of(pss[j]), j);
    }
    const std::size_t segments = seq.length() / segment_length;
    std::vector<std::vector<double>> out(segments, std::vector<double>(pss.size(), 0.0));
    std::vector<std::size_t> counts(pss.size());
    for (std::size_t s = 0; s < segments; ++s) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t t = s * segment_length; t < (s + 1) * segment_length; ++t) {
            const auto it = column.find(key_of(seq.state(t)));
            if (it != column.end()) ++counts[it->second];
        }
        for (std::size_t j = 0; j < pss.size(); ++j) {
            out[s][j] = static_cast<double>(counts[j]) / static_cast<double>(segment_length);
        }
    }
    return out;
}

std::vector<std::string> ProportionMatrix::subjects() const {
    std::vector<std::string> out;
    for (const auto& r : rows) {
        if (std::find(out.begin(), out.end(), r.subject_id) == out.end()) out.push_back(r.subject_id);
    }
    return out;
}

ProportionMatrix build_proportion_matrix(std::span<const LabelledSequence> subjects, std::span<const State> pss,
                                         std::size_t segment_length) {
    ProportionMatrix sigma{{pss.begin(), pss.end()}, segment_length, {}};
    for (const auto& s : subjects) {
        auto vectors = segment_proportions(s.states, pss, segment_length);
        for (std::size_t i = 0; i < vectors.size(); ++i) sigma.rows.push_back({s.subject_id, i, std::move(vectors[i])});
    }
    return sigma;
}

std::pair<ProportionMatrix, ProportionMatrix> split_alternating(const ProportionMatrix& sigma) {
    ProportionMatrix train{sigma.pss, sigma.segment_length, {}};
    ProportionMatrix test{sigma.pss, sigma.segment_length, {}};
    for (const auto& r : sigma.rows) (r.segment_index % 2 == 0 ? train : test).rows.push_back(r);
    return {std::move(train), std::move(test)};
}

KeyPssModel train_key_pss(const ProportionMatrix& sigma, std::size_t max_keys) {
    const auto subjects = sigma.subjects();
    if (subjects.size() < 2) throw PreconditionError("key-state training needs at least two subjects");
    const std::size_t n_pss = sigma.pss.size();
    if (n_pss == 0) throw PreconditionError("key-state training needs at least one principle state");
    for (const auto& s : subjects) {
        const auto n = std::count_if(sigma.rows.begin(), sigma.rows.end(), [&](const SegmentRow& r) { return r.subject_id == s; });
        if (n < 2) throw PreconditionError(fmt::format("subject '{}' has {} segments; at least 2 are needed", s, n));
    }

    KeyPssModel model;
    model.pss_count = n_pss;
    const std::size_t m = sigma.rows.size();
    for (const auto& subject : subjects) {
        std::vector<bool> own(m);
        for (std::size_t i = 0; i < m; ++i) own[i] = sigma.rows[i].subject_id == subject;

        SubjectKey key;
        key.subject_id = subject;
        key.centroid.assign(n_pss, 0.0);
        std::size_t own_count = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!own[i]) continue;
            ++own_count;
            for (std::size_t j = 0; j < n_pss; ++j) key.centroid[j] += sigma.rows[i].proportions[j];
        }
        for (auto& c : key.centroid) c /= static_cast<double>(own_count);

        std::vector<double> sums(m, 0.0);
        std::vector<bool> chosen(n_pss, false);
        double own_min = 0.0;
        double other_max = 0.0;
        double margin = -std::numeric_limits<double>::infinity();
        while (key.key_states.size() < max_keys && !(margin > 0.0)) {
            std::size_t best = n_pss;
            double best_margin = -std::numeric_limits<double>::infinity();
            double best_min = 0.0, best_max = 0.0;
            for (std::size_t j = 0; j < n_pss; ++j) {
                if (chosen[j]) continue;
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < m; ++i) {
                    const double v = sums[i] + sigma.rows[i].proportions[j];
                    if (own[i]) lo = std::min(lo, v);
                    else hi = std::max(hi, v);
                }
                if (lo - hi > best_margin) {
                    best_margin = lo - hi;
                    best = j;
                    best_min = lo;
                    best_max = hi;
                }
            }
            if (best == n_pss) break;
            chosen[best] = true;
            key.key_states.push_back(best);
            for (std::size_t i = 0; i < m; ++i) sums[i] += sigma.rows[i].proportions[best];
            margin = best_margin;
            own_min = best_min;
            other_max = best_max;
        }
        key.margin = margin;
        key.threshold = 0.5 * (own_min + other_max);
        model.subjects.push_back(std::move(key));
    }
    model.training_accuracy = accuracy(model, sigma);
    return model;
}

Classification classify_segment(const KeyPssModel& model, std::span<const double> proportions) {
    if (proportions.size() != model.pss_count) {
        throw DataError(fmt::format("proportion vector has {} entries, model expects {}", proportions.size(), model.pss_count));
    }
    Classification out;
    const SubjectScore* best = nullptr;
    for (const auto& key : model.subjects) {
        SubjectScore score{key.subject_id, 0.0, key.threshold, 0.0, false};
        for (auto j : key.key_states) score.key_share += proportions[j];
        score.fires = score.key_share > key.threshold;
        score.relative_margin = (score.key_share - key.threshold) / std::max(std::abs(key.threshold), 1e-12);
        out.scores.push_back(score);
    }
    for (const auto& s : out.scores) {
        if (s.fires && (!best || s.relative_margin > best->relative_margin)) best = &s;
    }
    if (best) {
        out.subject_id = best->subject_id;
        return out;
    }
    out.fallback = true;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& key : model.subjects) {
        double d = 0.0;
        for (std::size_t j = 0; j < proportions.size(); ++j) d += (proportions[j] - key.centroid[j]) * (proportions[j] - key.centroid[j]);
        if (d < best_d) {
            best_d = d;
            out.subject_id = key.subject_id;
        }
    }
    return out;
}

double accuracy(const KeyPssModel& model, const ProportionMatrix& sigma) {
    if (sigma.rows.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& r : sigma.rows) correct += classify_segment(model, r.proportions).subject_id == r.subject_id;
    return static_cast<double>(correct) / static_cast<double>(sigma.rows.size());
}

SigmaOrder cluster_sigma(const ProportionMatrix& sigma) {
    const std::size_t m = sigma.rows.size();
    const std::size_t n = sigma.pss.size();
    if (m < 2 || n < 2) throw PreconditionError(fmt::format("cannot cluster a {}x{} proportion matrix", m, n));
    Matrix rows(n, m);  // one point per segment
    Matrix cols(m, n);  // one point per state
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            rows(j, i) = sigma.rows[i].proportions[j];
            cols(i, j) = sigma.rows[i].proportions[j];
        }
    }
    return {hca::leaf_order(hca::agglomerate(rows, hca::Linkage::Average), m),
            hca::leaf_order(hca::agglomerate(cols, hca::Linkage::Average), n)};
}

namespace {
constexpr const char* kMagic = "gaitdyn-pssa-model";
constexpr int kVersion = 1;

State parse_state(const std::string& label, std::size_t dims, const LineReader& in) {
    State s;
    for (const auto& part : split(label, '-')) {
        if (part.size() != 1 || part[0] < '1' || part[0] > '3') in.fail(fmt::format("bad state label '{}'", label));
        s.push_back(static_cast<std::uint8_t>(part[0] - '0'));
    }
    if (s.size() != dims) in.fail(fmt::format("state '{}' does not have {} letters", label, dims));
    return s;
}
}  // namespace

std::string serialize(const PssaModel& model) {
    const auto& c = model.coding;
    std::string out = fmt::format("{} {}\n", kMagic, kVersion);
    out += fmt::format("alpha {}\nbeta {}\ndims {}\n", format_double(c.alpha), format_double(c.beta), c.channels.size());
    for (std::size_t d = 0; d < c.channels.size(); ++d) {
        out += fmt::format("cutoff {}_{} {} {}\n", c.channels[d].sensor, axis_name(c.channels[d].axis),
                           format_double(c.cutoffs[d].lower), format_double(c.cutoffs[d].upper));
    }
    out += fmt::format("segment_length {}\npss {}\n", model.segment_length, model.pss.size());
    for (const auto& s : model.pss) out += fmt::format("state {}\n", state_label(s));
    out += fmt::format("subjects {}\n", model.keys.subjects.size());
    for (const auto& k : model.keys.subjects) {
        out += fmt::format("subject {} {} {} {}", k.subject_id, format_double(k.threshold), format_double(k.margin),
                           k.key_states.size());
        for (auto j : k.key_states) out += fmt::format(" {}", j);
        out += "\ncentroid";
        for (double v : k.centroid) out += ' ' + format_double(v);
        out += '\n';
    }
    out += fmt::format("training_accuracy {}\nend\n", format_double(model.keys.training_accuracy));
    return out;
}

PssaModel deserialize_pssa_model(const std::string& text, const std::string& source) {
    LineReader in(text, source);
    const auto magic = in.next_fields();
    if (magic.size() != 2 || magic[0] != kMagic) in.fail("not a PSSA model file");
    if (to_int(magic[1], in) != kVersion) in.fail(fmt::format("unsupported model version {}", magic[1]));
    const auto one = [&](const char* key) {
        const auto f = in.expect(key);
        if (f.size() != 1) in.fail(fmt::format("'{}' takes one value", key));
        return f[0];
    };

    PssaModel model;
    model.coding.alpha = to_double(one("alpha"), in);
    model.coding.beta = to_double(one("beta"), in);
    const auto dims = static_cast<std::size_t>(to_int(one("dims"), in));
    for (std::size_t d = 0; d < dims; ++d) {
        const auto f = in.expect("cutoff");
        if (f.size() != 3) in.fail("cutoff lines have a channel and two values");
        const auto us = f[0].rfind('_');
        if (us == std::string::npos || us + 2 != f[0].size()) in.fail(fmt::format("bad channel '{}'", f[0]));
        const char ax = f[0].back();
        if (ax != 'X' && ax != 'Y' && ax != 'Z') in.fail(fmt::format("bad axis in '{}'", f[0]));
        model.coding.channels.push_back({f[0].substr(0, us), ax == 'X' ? Axis::X : ax == 'Y' ? Axis::Y : Axis::Z});
        model.coding.cutoffs.push_back({to_double(f[1], in), to_double(f[2], in)});
    }
    model.segment_length = static_cast<std::size_t>(to_int(one("segment_length"), in));
    const auto n_pss = static_cast<std::size_t>(to_int(one("pss"), in));
    for (std::size_t j = 0; j < n_pss; ++j) model.pss.push_back(parse_state(one("state"), dims, in));
    model.keys.pss_count = n_pss;
    const auto n_subjects = static_cast<std::size_t>(to_int(one("subjects"), in));
    for (std::size_t s = 0; s < n_subjects; ++s) {
        const auto f = in.expect("subject");
        if (f.size() < 4) in.fail("subject line too short");
        SubjectKey k;
        k.subject_id = f[0];
        k.threshold = to_double(f[1], in);
        k.margin = to_double(f[2], in);
        const auto n_keys = static_cast<std::size_t>(to_int(f[3], in));
        if (f.size() != 4 + n_keys) in.fail("key count does not match the listed keys");
        for (std::size_t i = 0; i < n_keys; ++i) {
            const auto j = to_int(f[4 + i], in);
            if (j < 0 || static_cast<std::size_t>(j) >= n_pss) in.fail("key index out of range");
            k.key_states.push_back(static_cast<std::size_t>(j));
        }
        const auto c = in.expect("centroid");
        if (c.size() != n_pss) in.fail("centroid length differs from the PSS count");
        for (const auto& v : c) k.centroid.push_back(to_double(v, in));
        model.keys.subjects.push_back(std::move(k));
    }
    model.keys.training_accuracy = to_double(one("training_accuracy"), in);
    if (in.next_fields() != std::vector<std::string>{"end"}) in.fail("missing 'end'");
    return model;
}

std::string sigma_to_csv(const ProportionMatrix& sigma) {
    std::string out = "subject,segment";
    for (const auto& s : sigma.pss) out += ',' + state_label(s);
    out += '\n';
    for (const auto& r : sigma.rows) {
        out += fmt::format("{},{}", r.subject_id, r.segment_index);
        for (double v : r.proportions) out += ',' + format_double(v);
        out += '\n';
    }
    return out;
}

}  // namespace gaitdyn::pssa
