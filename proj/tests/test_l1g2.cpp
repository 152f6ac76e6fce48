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
#include "gaitdyn/l1g2.hpp"
#include "gaitdyn/symbolic.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace gaitdyn;
using namespace gaitdyn::l1g2;

namespace {

SensorTriplet triplet(const std::string& sensor, const Matrix& m) {
    return SensorTriplet(TimeSeriesFrame(m, {{sensor, Axis::X}, {sensor, Axis::Y}, {sensor, Axis::Z}}, 128.0));
}

Matrix ramp(std::size_t n, double base) {
    Matrix m(3, n);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = base + 10.0 * static_cast<double>(r) + static_cast<double>(c);
    return m;
}

// Columns before `switch_at` sit near (0,0,0), later ones near (8,8,8).
Matrix two_regimes(std::size_t n, std::size_t switch_at, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.1);
    Matrix m(3, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < 3; ++r) m(r, c) = (c < switch_at ? 0.0 : 8.0) + g(rng);
    return m;
}

}  // namespace

TEST_CASE("stack_lr places left then right") {
    const auto left = triplet("LF", ramp(5, 0.0));
    const auto right = triplet("RF", ramp(5, 100.0));
    const Matrix s = stack_lr(left, right);
    REQUIRE(s.rows() == 3);
    REQUIRE(s.cols() == 10);
    // hand assembly: row r, col c is base + 10r + (c mod 5), base 0 then 100
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 10; ++c) {
            const double want = (c < 5 ? 0.0 : 100.0) + 10.0 * static_cast<double>(r) + static_cast<double>(c % 5);
            CHECK(s(r, c) == want);
        }
    }
    const Matrix d = stack_lr(left, left);
    CHECK(d.column_range(0, 5) == d.column_range(5, 10));
    CHECK_THROWS_AS(stack_lr(left, triplet("RF", ramp(4, 0.0))), DataError);
}

TEST_CASE("encoding inside the fit window reproduces the fit labels") {
    const auto w = ingest::synthesize_walker({.seed = 4, .cycles = 12, .period_mean = 64, .period_jitter = 2});
    const auto lf = SensorTriplet::from_frame(w.frame, "LF");
    const auto rf = SensorTriplet::from_frame(w.frame, "RF");
    const std::vector<SensorTriplet> src{lf, rf};
    for (auto link : {hca::Linkage::Ward, hca::Linkage::Average}) {
        const auto code = fit_local_code(src, 10, "feet", 100, 500, {.linkage = link});
        const auto a = encode_subsystem(code, lf);
        const auto b = encode_subsystem(code, rf);
        CHECK(a.alphabet_size() == 10);
        CHECK(a.size() == lf.length());
        for (std::size_t t = 0; t < 400; ++t) {
            CHECK(a[100 + t] == code.clustering.assignments[t]);
            CHECK(b[100 + t] == code.clustering.assignments[400 + t]);
        }
    }
}

TEST_CASE("encoding constant and two-regime signals") {
    const auto fitted = triplet("Waist", two_regimes(200, 120, 3));
    const std::vector<SensorTriplet> src{fitted};
    const auto code = fit_local_code(src, 2, "waist");
    CHECK(code.window_begin == 0);
    CHECK(code.window_end == 200);

    const auto flat = encode_subsystem(code, triplet("Wrist", Matrix(3, 50, 0.3)));
    for (std::size_t t = 1; t < 50; ++t) CHECK(flat[t] == flat[0]);

    // unseen sensor, so every column goes through nearest-centroid lookup
    const auto probe = encode_subsystem(code, triplet("Wrist", two_regimes(90, 37, 8)));
    std::size_t switches = 0, at = 0;
    for (std::size_t t = 1; t < 90; ++t) {
        if (probe[t] != probe[t - 1]) {
            ++switches;
            at = t;
        }
    }
    CHECK(switches == 1);
    CHECK(at >= 36);
    CHECK(at <= 38);
}

TEST_CASE("single-cluster code is constant") {
    const std::vector<SensorTriplet> src{triplet("LF", ramp(20, 0.0))};
    const auto code = fit_local_code(src, 1, "feet");
    const auto s = encode_subsystem(code, src[0]);
    for (std::size_t t = 0; t < 20; ++t) CHECK(s[t] == 0);
}

TEST_CASE("fit_local_code errors") {
    const std::vector<SensorTriplet> twice{triplet("LF", ramp(20, 0.0)), triplet("LF", ramp(20, 1.0))};
    CHECK_THROWS_AS(fit_local_code(twice, 2, "feet"), ConfigError);
    const std::vector<SensorTriplet> one{triplet("LF", ramp(20, 0.0))};
    CHECK_THROWS_AS(fit_local_code(one, 21, "feet"), PreconditionError);
    CHECK_THROWS_AS(fit_local_code(one, 2, "feet", 0, 30), PreconditionError);
    CHECK_THROWS_AS(fit_local_code(one, 2, "two words"), ConfigError);
    CHECK_THROWS_AS(fit_local_code(std::span<const SensorTriplet>{}, 2, "feet"), PreconditionError);
}

TEST_CASE("couple and project") {
    const SymbolSequence l({0, 1, 2, 3, 4}, 5);
    const SymbolSequence r({4, 4, 0, 1, 1}, 10);
    const SymbolSequence ls[] = {l, r};
    const auto c = couple(ls, {"LF", "RF"});
    CHECK(c.arity() == 2);
    CHECK(c.length() == 5);
    CHECK(c.alphabets() == std::vector<std::uint32_t>{5, 10});
    CHECK(state_label(c.state(2)) == "2.0");
    CHECK(c.projection(0).symbols()[3] == 3);
    CHECK(std::ranges::equal(c.projection(1).symbols(), r.symbols()));
    CHECK(c.slice(1, 3).length() == 2);
    CHECK(parse_state_label("2.0") == std::vector<std::uint32_t>{2, 0});
    CHECK_THROWS_AS(parse_state_label("2.x"), ConfigError);

    const SymbolSequence single[] = {l};
    CHECK(couple(single, {"LF"}).arity() == 1);
    const SymbolSequence bad[] = {l, SymbolSequence({1}, 2)};
    CHECK_THROWS_AS(couple(bad, {"LF", "RF"}), PreconditionError);
}

TEST_CASE("code book round trip") {
    const auto w = ingest::synthesize_walker({.seed = 2, .cycles = 4, .period_mean = 40, .period_jitter = 1});
    const std::vector<SensorTriplet> src{SensorTriplet::from_frame(w.frame, "LF"), SensorTriplet::from_frame(w.frame, "RF")};
    const auto code = fit_local_code(src, 6, "feet");
    const auto text = serialize(code);
    const auto back = deserialize_local_code(text);
    CHECK(back == code);
    CHECK(serialize(back) == text);
    CHECK(code_book_id(back) == code_book_id(code));
    CHECK(code_book_id(code).size() == 16);
    CHECK_THROWS_AS(deserialize_local_code("gaitdyn-codebook 1\nlabel feet\n"), DataError);
    CHECK_THROWS_AS(deserialize_local_code(text.substr(0, text.size() - 4)), DataError);
}

TEST_CASE("cluster coding of one foot is simpler than the naive ternary product") {
    const auto w = ingest::synthesize_walker({.seed = 5, .cycles = 8, .period_mean = 128, .period_jitter = 2});
    const auto lf = SensorTriplet::from_frame(w.frame, "LF");
    const std::vector<SensorTriplet> src{lf};
    const auto hca_code = encode_subsystem(fit_local_code(src, 27, "LF"), lf);

    const std::vector<TimeSeriesFrame> frames{lf.frame()};
    const auto ternary = symbolic::encode_ternary(lf.frame(), symbolic::fit_ternary(frames, 0.3, 0.7));
    std::vector<SymbolSequence> axes;
    for (std::size_t d = 0; d < 3; ++d) axes.push_back(from_ternary(ternary.dimension(d)));
    const auto naive = complexity::couple_naive(axes);
    CHECK(naive.alphabet_size() == 27);
    CHECK(complexity::lz76_complexity(hca_code) < complexity::lz76_complexity(naive));
}
