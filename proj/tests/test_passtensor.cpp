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
#include "gaitdyn/ingest.hpp"
#include "gaitdyn/passtensor.hpp"

#include <doctest.h>

#include <random>

using namespace gaitdyn;
using namespace gaitdyn::passtensor;
using l1g2::CoupledStateSequence;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

// Two rings; cycle k (0-based) has length 16 + k % 3, codes follow the phase.
struct Fixture {
    CoupledStateSequence seq;
    landmark::CyclePartition partition;
};

Fixture periodic(std::size_t cycles) {
    std::vector<std::uint32_t> codes;
    landmark::CyclePartition p;
    p.landmark = {0, 3};
    std::size_t t = 0;
    for (std::size_t k = 0; k < cycles; ++k) {
        const std::size_t len = 16 + k % 3;
        p.boundaries.push_back(t);
        for (std::size_t i = 0; i < len; ++i) {
            codes.push_back(static_cast<std::uint32_t>(4 * i / len));
            codes.push_back(static_cast<std::uint32_t>(3 + 2 * i / len) % 5);
        }
        p.cycles.push_back({t, t + len});
        t += len;
    }
    p.boundaries.push_back(t);
    codes.push_back(0);
    codes.push_back(3);
    return {CoupledStateSequence(codes, {"LF", "RF"}, {4, 5}), p};
}

}  // namespace

TEST_CASE("bin centres") {
    // hand arithmetic: floor((2b+1) * 10 / 10)
    std::vector<std::size_t> got;
    for (std::size_t b = 0; b < 5; ++b) got.push_back(bin_sample(b, 10, 5));
    CHECK(got == std::vector<std::size_t>{1, 3, 5, 7, 9});
    for (std::size_t b = 0; b < 128; ++b) CHECK(bin_sample(b, 128, 128) == b);
}

TEST_CASE("normalize_cycle") {
    std::vector<std::uint32_t> codes;
    for (std::uint32_t i = 0; i < 12; ++i) codes.push_back(i);
    const CoupledStateSequence seq(codes, {"S"}, {12});
    const auto id = normalize_cycle(seq, {2, 10}, 8);
    CHECK(id.codes == std::vector<std::uint32_t>{2, 3, 4, 5, 6, 7, 8, 9});

    const CoupledStateSequence flat(std::vector<std::uint32_t>(40, 3), {"S"}, {4});
    const auto g = normalize_cycle(flat, {0, 40}, 16);
    for (auto c : g.codes) CHECK(c == 3);

    CHECK_THROWS_AS(normalize_cycle(seq, {4, 4}, 8), PreconditionError);
    CHECK_THROWS_AS(normalize_cycle(seq, {0, 12}, 7), ConfigError);
    CHECK_THROWS_AS(normalize_cycle(seq, {0, 13}, 8), PreconditionError);
}

TEST_CASE("build_passtensor") {
    const auto f = periodic(80);
    const auto all = build_passtensor(f.seq, f.partition, 16);
    CHECK(all.cycles == 80);
    CHECK(all.rings == 2);
    CHECK(all.raw_lengths[1] == 17);
    CHECK(all.grid(0) == normalize_cycle(f.seq, f.partition.cycles[0], 16));

    const auto trimmed = build_passtensor(f.seq, f.partition, 16, kReferenceCycleRange);
    CHECK(trimmed.cycles == 68);
    CHECK(trimmed.first_cycle == 3);
    CHECK(trimmed.grid(0) == all.grid(2));

    const auto small = periodic(10);
    CHECK(build_passtensor(small.seq, small.partition, 16, kReferenceCycleRange).cycles == 8);
    CHECK(build_passtensor(small.seq, small.partition, 16, CycleRange{4, 4}).cycles == 1);
    CHECK_THROWS_AS(build_passtensor(small.seq, small.partition, 16, CycleRange{11, 20}), PreconditionError);
    CHECK_THROWS_AS(build_passtensor(small.seq, small.partition, 16, CycleRange{5, 2}), ConfigError);
}

TEST_CASE("lossless at one bin per sample") {
    std::mt19937_64 rng(2);
    std::vector<std::uint32_t> codes;
    for (int i = 0; i < 64; ++i) codes.push_back(static_cast<std::uint32_t>(rng() % 6));
    const CoupledStateSequence seq(codes, {"S"}, {6});
    const auto g = normalize_cycle(seq, {10, 42}, 32);
    CHECK(g.codes == std::vector<std::uint32_t>(codes.begin() + 10, codes.begin() + 42));
}

TEST_CASE("skeleton ties go to the smaller code") {
    Passtensor pt;
    pt.cycles = 2;
    pt.rings = 1;
    pt.bins = 8;
    pt.ring_alphabets = {5};
    pt.tensor = {4, 1, 1, 1, 1, 1, 1, 1,  //
                 2, 1, 1, 1, 1, 1, 1, 3};
    const auto s = skeleton(pt);
    CHECK(s.at(0, 0) == 2);
    CHECK(s.at(0, 7) == 1);
}

TEST_CASE("compare: identity, symmetry and perturbation") {
    const auto f = periodic(30);
    auto a = build_passtensor(f.seq, f.partition, 16, std::nullopt, "book");
    const auto self = compare_passtensors(a, a);
    CHECK(self.distance == 0.0);
    CHECK(self.skeleton_agreement == 1.0);
    CHECK(self.stochastic_agreement == 1.0);
    CHECK(self.mismatches.empty());

    auto b = a;
    double last = 0.0;
    std::mt19937_64 rng(9);
    for (int k = 1; k <= 25; ++k) {
        // change one more cell, always away from its original code
        const std::size_t c = rng() % b.cycles, r = rng() % 2, bin = rng() % 16;
        if (b.at(c, r, bin) != a.at(c, r, bin)) {
            --k;
            continue;
        }
        b.at(c, r, bin) = (a.at(c, r, bin) + 1) % (r == 0 ? 4 : 5);
        const auto d = compare_passtensors(a, b);
        CHECK(d.distance > last);
        CHECK(d.distance == compare_passtensors(b, a).distance);
        last = d.distance;
    }

    auto other = a;
    other.code_book_id = "other";
    CHECK_THROWS_AS(compare_passtensors(a, other), PreconditionError);
    auto rings = a;
    rings.ring_labels = {"LF", "Waist"};
    CHECK_THROWS_AS(compare_passtensors(a, rings), PreconditionError);
    CHECK_THROWS_AS(compare_passtensors(a, a, {.skeleton = 0.0, .stochastic = 0.0}), ConfigError);
}

TEST_CASE("jitter-free walker: the skeleton equals every cycle") {
    const auto w = ingest::synthesize_walker({.seed = 3, .cycles = 12, .period_mean = 64, .period_jitter = 0, .noise_sd = 0.0});
    const auto lf = SensorTriplet::from_frame(w.frame, "LF");
    const auto rf = SensorTriplet::from_frame(w.frame, "RF");
    const std::vector<SensorTriplet> src{lf, rf};
    const auto code = l1g2::fit_local_code(src, 10, "feet");
    const std::vector<SymbolSequence> parts{l1g2::encode_subsystem(code, lf), l1g2::encode_subsystem(code, rf)};
    const auto seq = l1g2::couple(parts, {"LF", "RF"});
    const auto p = landmark::partition_cycles(seq, landmark::select_landmark(landmark::run_statistics(seq)));
    REQUIRE(p.cycles.size() == 12);
    const auto pt = build_passtensor(seq, p, 64);
    const auto sk = skeleton(pt);
    for (std::size_t c = 0; c < pt.cycles; ++c) CHECK(pt.grid(c) == sk);
}

TEST_CASE("threshold calibration") {
    CHECK(calibrate_threshold({0.0, 0.1, 0.2, 0.3, 0.4}, 0.5) == doctest::Approx(0.2));
    CHECK(calibrate_threshold({0.05}) == 0.05);
    CHECK_THROWS_AS(calibrate_threshold({}), PreconditionError);
}

TEST_CASE("passtensor file round trip") {
    const auto f = periodic(5);
    const auto pt = build_passtensor(f.seq, f.partition, 8, std::nullopt, "abc123");
    const auto text = serialize(pt);
    const auto back = deserialize_passtensor(text);
    CHECK(back == pt);
    CHECK(serialize(back) == text);
    auto bad = text;
    bad.replace(bad.find("grid\n") + 5, 1, "7");  // code 7 outside LF's alphabet of 4
    CHECK_THROWS_AS(deserialize_passtensor(bad), DataError);
    CHECK_THROWS_AS(deserialize_passtensor(text.substr(0, text.size() - 4)), DataError);
}

TEST_CASE("ring rendering") {
    // alternating codes so that every bin is its own sector
    CodeGrid g{1, 8, {0, 1, 0, 1, 0, 1, 0, 1}};
    const auto pal = svg::default_palette(2);
    const auto svg_text = render_rings(g, pal);
    CHECK(svg_text == render_rings(g, pal));
    // outer radius 76 around (136, 116): bin 0 starts at nine o'clock and
    // ends 45 degrees clockwise, at (136 - 76 cos 45, 116 - 76 sin 45)
    CHECK(svg_text.find("d=\"M60.000,116.000 A76.000,76.000 0 0 1 82.260,62.260") != std::string::npos);
    CHECK(count_of(svg_text, "<path") == 8);

    CodeGrid three{3, 8, std::vector<std::uint32_t>(24, 0)};
    CHECK(count_of(render_rings(three, pal), "data-ring=") == 3);
    CHECK_THROWS_AS(render_rings(g, svg::default_palette(1)), PreconditionError);
}

TEST_CASE("cylinder rendering") {
    const auto f = periodic(6);
    const auto pt = build_passtensor(f.seq, f.partition, 8);
    const auto pal = svg::default_palette(5);
    const auto unrolled = render_cylinder(pt, pal, CylinderView::Unrolled);
    CHECK(unrolled == render_cylinder(pt, pal, CylinderView::Unrolled));
    CHECK(count_of(unrolled, "data-ring=") == 2);
    const auto iso = render_cylinder(pt, pal, CylinderView::Isometric);
    CHECK(count_of(iso, "data-cycle=") == 6);
    CHECK(count_of(iso, "<polygon") == 6 * 2 * 8);
    CHECK_THROWS_AS(parse_view("spiral"), ConfigError);

    // one cycle unrolled is one strip per ring: one rectangle per run of equal codes
    const Passtensor one = build_passtensor(f.seq, f.partition, 8, CycleRange{1, 1});
    const auto g = one.grid(0);
    std::size_t runs = 0;
    for (std::size_t r = 0; r < g.rings; ++r)
        for (std::size_t b = 0; b < g.bins; ++b) runs += b == 0 || g.at(r, b) != g.at(r, b - 1);
    CHECK(count_of(render_cylinder(one, pal, CylinderView::Unrolled), "<rect") == runs + 1);
}
