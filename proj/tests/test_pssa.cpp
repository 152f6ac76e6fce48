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

#include "gaitdyn/error.hpp"
#include "gaitdyn/pssa.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

using namespace gaitdyn;
using namespace gaitdyn::pssa;
using symbolic::StateVectorSequence;

namespace {

StateVectorSequence seq_of(const std::vector<State>& states) {
    std::vector<std::uint8_t> letters;
    for (const auto& s : states) letters.insert(letters.end(), s.begin(), s.end());
    return {states.front().size(), letters};
}

// Each segment of subject k draws mostly from its own pair of states.
std::vector<LabelledSequence> two_subjects(std::size_t segments, std::size_t l, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<State> pool{{1, 1}, {1, 2}, {2, 2}, {3, 3}, {2, 3}, {3, 1}};
    std::vector<LabelledSequence> out;
    for (std::size_t k = 0; k < 2; ++k) {
        std::vector<State> states;
        for (std::size_t t = 0; t < segments * l; ++t) {
            const auto u = rng() % 10;
            if (u < 7) states.push_back(pool[2 * k + (rng() % 2)]);
            else states.push_back(pool[4 + (rng() % 2)]);
        }
        out.push_back({k == 0 ? "A" : "B", seq_of(states)});
    }
    return out;
}

}  // namespace

TEST_CASE("state table ranks by frequency then tuple") {
    std::vector<State> s;
    for (int i = 0; i < 3; ++i) s.push_back({3, 3});
    for (int i = 0; i < 5; ++i) s.push_back({1, 1});
    for (int i = 0; i < 3; ++i) s.push_back({2, 3});
    const std::vector<StateVectorSequence> seqs{seq_of(s)};
    const auto t = build_state_table(seqs);
    REQUIRE(t.distinct() == 3);
    CHECK(t.states == std::vector<State>{{1, 1}, {2, 3}, {3, 3}});
    CHECK(t.frequencies == std::vector<std::size_t>{5, 3, 3});
    CHECK(t.pool_size == 11);
    CHECK(state_label(t.states[1]) == "2-3");
}

TEST_CASE("coverage curve and PSS count") {
    std::vector<State> s;
    for (int i = 0; i < 6; ++i) s.push_back({1});
    for (int i = 0; i < 3; ++i) s.push_back({2});
    s.push_back({3});
    const std::vector<StateVectorSequence> seqs{seq_of(s)};
    const auto t = build_state_table(seqs);
    const auto r = coverage_curve(t);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(0.6));
    CHECK(r[1] == doctest::Approx(0.9));
    CHECK(r[2] == 1.0);
    const auto lit = coverage_curve(t, CoverageDenominator::DistinctStates);
    CHECK(lit[0] == doctest::Approx(2.0));
    CHECK(pss_count_for_coverage(t, 0.6) == 1);
    CHECK(pss_count_for_coverage(t, 0.9) == 2);
    CHECK(pss_count_for_coverage(t, 0.95) == 3);
    CHECK_THROWS_AS(pss_count_for_coverage(t, 0.0), ConfigError);
    CHECK_THROWS_AS(principle_states(t, 4), PreconditionError);
}

TEST_CASE("segment proportions") {
    const std::vector<State> pss{{1, 1}, {2, 1}};
    const auto seq = seq_of({{1, 1}, {1, 1}, {2, 1}, {3, 3}, {2, 1}, {2, 1}, {2, 1}, {2, 1}, {1, 1}});
    const auto p = segment_proportions(seq, pss, 4);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == std::vector<double>{0.5, 0.25});
    CHECK(p[1] == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(segment_proportions(seq, pss, 10), PreconditionError);
    CHECK_THROWS_AS(segment_proportions(seq, pss, 0), ConfigError);
}

TEST_CASE("disjoint subjects are identified exactly") {
    const auto subjects = two_subjects(40, 50, 3);
    std::vector<StateVectorSequence> seqs;
    for (const auto& s : subjects) seqs.push_back(s.states);
    const auto table = build_state_table(seqs);
    const auto pss = principle_states(table, table.distinct());
    const auto sigma = build_proportion_matrix(subjects, pss, 50);
    CHECK(sigma.rows.size() == 80);
    CHECK(sigma.subjects() == std::vector<std::string>{"A", "B"});
    const auto [train, test] = split_alternating(sigma);
    CHECK(train.rows.size() == 40);
    for (const auto& r : train.rows) CHECK(r.segment_index % 2 == 0);
    const auto model = train_key_pss(train);
    CHECK(model.training_accuracy == 1.0);
    CHECK(accuracy(model, test) == 1.0);
    for (const auto& k : model.subjects) {
        CHECK(k.margin > 0.0);
        CHECK(k.key_states.size() <= 10);
    }
}

TEST_CASE("no firing rule falls back to the nearest centroid") {
    KeyPssModel m;
    m.pss_count = 2;
    m.subjects = {{"A", {0}, 0.5, 0.1, {0.9, 0.1}}, {"B", {1}, 0.5, 0.1, {0.1, 0.9}}};
    const std::vector<double> zero{0.0, 0.0};
    const auto c = classify_segment(m, zero);
    CHECK(c.fallback);
    CHECK(c.subject_id == "A");  // equidistant; first subject wins
    const std::vector<double> b{0.1, 0.6};
    const auto cb = classify_segment(m, b);
    CHECK_FALSE(cb.fallback);
    CHECK(cb.subject_id == "B");
    CHECK(cb.scores[1].relative_margin == doctest::Approx(0.2));
    const std::vector<double> bad{0.1};
    CHECK_THROWS_AS(classify_segment(m, bad), DataError);
}

TEST_CASE("training needs two subjects with two segments each") {
    ProportionMatrix one{{{1}}, 4, {{"A", 0, {1.0}}, {"A", 1, {0.5}}}};
    CHECK_THROWS_AS(train_key_pss(one), PreconditionError);
    ProportionMatrix thin{{{1}}, 4, {{"A", 0, {1.0}}, {"A", 1, {0.5}}, {"B", 0, {0.0}}}};
    CHECK_THROWS_AS(train_key_pss(thin), PreconditionError);
}

TEST_CASE("key selection ignores subject label names") {
    const auto subjects = two_subjects(20, 40, 11);
    std::vector<StateVectorSequence> seqs{subjects[0].states, subjects[1].states};
    const auto table = build_state_table(seqs);
    const auto pss = principle_states(table, table.distinct());
    auto sigma = build_proportion_matrix(subjects, pss, 40);
    const auto a = train_key_pss(sigma);
    for (auto& r : sigma.rows) r.subject_id = r.subject_id == "A" ? "zeta" : "eta";
    const auto b = train_key_pss(sigma);
    CHECK(a.subjects[0].key_states == b.subjects[0].key_states);
    CHECK(a.subjects[1].key_states == b.subjects[1].key_states);
    CHECK(a.training_accuracy == b.training_accuracy);
}

TEST_CASE("cluster_sigma groups identical and block rows") {
    ProportionMatrix sigma;
    sigma.pss = {{1}, {2}, {3}, {1}};  // labels only matter for size here
    sigma.segment_length = 4;
    // Rows alternate between two blocks; block rows are identical.
    for (std::size_t i = 0; i < 8; ++i) {
        sigma.rows.push_back({i % 2 ? "B" : "A", i, i % 2 ? std::vector<double>{0, 0, 0.9, 0.1} : std::vector<double>{0.8, 0.2, 0, 0}});
    }
    const auto order = cluster_sigma(sigma);
    REQUIRE(order.rows.size() == 8);
    std::vector<char> blocks;
    for (auto r : order.rows) blocks.push_back(sigma.rows[r].subject_id[0]);
    // Each block appears as one contiguous run.
    CHECK(std::unique(blocks.begin(), blocks.end()) - blocks.begin() == 2);
    auto cols = order.columns;
    std::sort(cols.begin(), cols.end());
    CHECK(cols == std::vector<std::size_t>{0, 1, 2, 3});

    ProportionMatrix tiny{{{1}}, 4, {{"A", 0, {1.0}}}};
    CHECK_THROWS_AS(cluster_sigma(tiny), PreconditionError);
}

TEST_CASE("cluster_sigma is unchanged by scaling the matrix") {
    const auto subjects = two_subjects(10, 30, 17);
    std::vector<StateVectorSequence> seqs{subjects[0].states, subjects[1].states};
    const auto table = build_state_table(seqs);
    auto sigma = build_proportion_matrix(subjects, principle_states(table, table.distinct()), 30);
    const auto a = cluster_sigma(sigma);
    for (auto& r : sigma.rows)
        for (auto& v : r.proportions) v *= 4.0;
    const auto b = cluster_sigma(sigma);
    CHECK(a.rows == b.rows);
    CHECK(a.columns == b.columns);
}

TEST_CASE("model serialization round trip") {
    const auto subjects = two_subjects(12, 30, 5);
    std::vector<StateVectorSequence> seqs{subjects[0].states, subjects[1].states};
    const auto table = build_state_table(seqs);
    PssaModel m;
    m.coding = {0.3, 0.7, {{"LF", Axis::X}, {"LF", Axis::Y}}, {{-0.5, 0.25}, {1.0, 2.125}}};
    m.pss = principle_states(table, 4);
    m.segment_length = 30;
    m.keys = train_key_pss(build_proportion_matrix(subjects, m.pss, 30));
    const auto text = serialize(m);
    const auto back = deserialize_pssa_model(text);
    CHECK(back.pss == m.pss);
    CHECK(back.keys == m.keys);
    CHECK(back.coding.channels == m.coding.channels);
    CHECK(back.coding.cutoffs[1].upper == 2.125);
    CHECK(serialize(back) == text);
    CHECK_THROWS_AS(deserialize_pssa_model("gaitdyn-pssa-model 2\n"), DataError);
    CHECK_THROWS_AS(deserialize_pssa_model(text.substr(0, text.size() - 5)), DataError);

    const auto csv = sigma_to_csv(build_proportion_matrix(subjects, m.pss, 30));
    CHECK(csv.rfind("subject,segment,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 25);
}
