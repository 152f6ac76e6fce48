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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

using namespace gaitdyn;
using namespace gaitdyn::ingest;

namespace {

const std::filesystem::path kFixtures = GAITDYN_FIXTURES;

// Values authored together with marea_combined_10.csv.
Matrix expected_lf_rf() {
    Matrix m(6, 10);
    for (std::size_t t = 0; t < 10; ++t) {
        const double td = static_cast<double>(t);
        m(0, t) = td + 1;
        m(1, t) = 10 - td;
        m(2, t) = static_cast<double>(t % 3) - 1;
        m(3, t) = -(td + 1) * 0.5;
        m(4, t) = 2 + td;
        m(5, t) = 9.81 - td * 0.25;
    }
    return m;
}

}  // namespace

TEST_CASE("load_marea orders rows by the sensors argument") {
    const auto f = load_marea(kFixtures / "marea_combined_10.csv", "7", {"LF", "RF"});
    CHECK(f.dims() == 6);
    CHECK(f.length() == 10);
    CHECK(f.sample_rate_hz() == 128.0);
    CHECK(f.subject_id() == "7");
    CHECK(f.values() == expected_lf_rf());
    CHECK(f.channels()[0] == Channel{"LF", Axis::X});
    CHECK(f.channels()[5] == Channel{"RF", Axis::Z});

    const auto rev = load_marea(kFixtures / "marea_combined_10.csv", "7", {"RF", "LF"});
    CHECK(rev.channels()[0] == Channel{"RF", Axis::X});
    CHECK(rev.values()(0, 3) == f.values()(3, 3));
}

TEST_CASE("load_marea: single sensor gives three rows") {
    const auto f = load_marea(kFixtures / "marea_combined_10.csv", "7", {"Waist"});
    CHECK(f.dims() == 3);
}

TEST_CASE("load_marea reads whitespace files and per-sensor directories identically") {
    const auto a = load_marea(kFixtures / "marea_combined_10.csv", "3", {"LF", "RF"});
    const auto b = load_marea(kFixtures / "marea_combined_10_ws.txt", "3", {"LF", "RF"});
    const auto c = load_marea(kFixtures / "marea_sub3", "3", {"LF", "RF"});
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("load_marea is pure") {
    const auto a = load_marea(kFixtures / "marea_combined_10.csv", "3", {"LF", "RF"});
    const auto b = load_marea(kFixtures / "marea_combined_10.csv", "3", {"LF", "RF"});
    CHECK(a == b);
}

TEST_CASE("load_marea error paths") {
    CHECK_THROWS_AS(load_marea(kFixtures / "nope.csv", "1", {"LF"}), DataError);
    CHECK_THROWS_AS(load_marea(kFixtures / "marea_combined_10.csv", "1", {"Ankle"}), ConfigError);
    CHECK_THROWS_AS(load_marea(kFixtures / "marea_combined_10.csv", "1", {"Wrist"}), DataError);
    CHECK_THROWS_AS(load_marea(kFixtures / "marea_ragged.csv", "1", {"LF"}), DataError);
    try {
        load_marea(kFixtures / "marea_nonnumeric.csv", "1", {"LF"});
        FAIL("expected a DataError");
    } catch (const DataError& e) {
        const std::string what = e.what();
        // two license lines precede the header
        CHECK(what.find(":5:") != std::string::npos);
        CHECK(what.find("LF_accY") != std::string::npos);
    }
}

TEST_CASE("load_hugadb takes the 18 accelerometer channels") {
    const auto f = load_hugadb(kFixtures / "hugadb_5.txt", "12");
    REQUIRE(f.dims() == 18);
    REQUIRE(f.length() == 5);
    CHECK(f.activity() == "Walking");
    for (std::size_t s = 0; s < 6; ++s) {
        CHECK(f.channels()[3 * s].sensor == hugadb_sensors()[s]);
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t t = 0; t < 5; ++t) {
                CHECK(f.values()(3 * s + a, t) == static_cast<double>(100 * s + 10 * a + t));
            }
        }
    }
    CHECK_THROWS_AS(load_hugadb(kFixtures / "hugadb_gyro_only.txt", "1"), DataError);
}

TEST_CASE("frame validation") {
    CHECK_THROWS_AS(TimeSeriesFrame(Matrix(1, 2), {{"A", Axis::X}}, 0.0), DataError);
    CHECK_THROWS_AS(TimeSeriesFrame(Matrix(2, 2), {{"A", Axis::X}, {"A", Axis::X}}, 1.0), DataError);
    Matrix nan(1, 2);
    nan(0, 1) = std::nan("");
    CHECK_THROWS_AS(TimeSeriesFrame(nan, {{"A", Axis::X}}, 1.0), DataError);
    CHECK_THROWS_AS(SensorTriplet(TimeSeriesFrame(Matrix(3, 1), {{"A", Axis::X}, {"A", Axis::Z}, {"A", Axis::Y}}, 1.0)),
                    DataError);
}

TEST_CASE("fixture round trip") {
    const auto walk = synthesize_walker({.seed = 3, .cycles = 3, .period_mean = 20, .period_jitter = 2, .sensors = 3});
    const auto path = std::filesystem::temp_directory_path() / "gaitdyn_fixture_roundtrip.csv";
    write_fixture(path, walk.frame);
    const auto back = load_fixture(path, walk.frame.subject_id());
    CHECK(back == walk.frame);
    std::filesystem::remove(path);
}

TEST_CASE("synthesize_walker") {
    SUBCASE("no jitter gives equal cycles") {
        const auto w = synthesize_walker({.seed = 9, .cycles = 12, .period_mean = 100.4, .period_jitter = 0});
        for (auto len : w.cycle_lengths) CHECK(len == 100);
    }
    SUBCASE("deterministic in the seed") {
        WalkerOptions o{.seed = 5, .cycles = 10, .period_mean = 64, .period_jitter = 3, .sensors = 4};
        CHECK(synthesize_walker(o).frame == synthesize_walker(o).frame);
        auto o2 = o;
        o2.seed = 6;
        CHECK_FALSE(synthesize_walker(o2).frame == synthesize_walker(o).frame);
    }
    SUBCASE("seed 1, 50 cycles, period 128, jitter 2") {
        const auto w = synthesize_walker({.seed = 1, .cycles = 50, .period_mean = 128, .period_jitter = 2});
        const double mean = std::accumulate(w.cycle_lengths.begin(), w.cycle_lengths.end(), 0.0) / 50.0;
        CHECK(mean >= 126.0);
        CHECK(mean <= 130.0);
        for (auto len : w.cycle_lengths) {
            CHECK(len >= 126);
            CHECK(len <= 130);
        }
    }
    SUBCASE("boundaries partition [0, T)") {
        const auto w = synthesize_walker({.seed = 2, .cycles = 7, .period_mean = 50, .period_jitter = 5, .tail = 10});
        CHECK(w.boundaries.front() == 0);
        CHECK(w.boundaries.back() == w.frame.length());
        CHECK(std::is_sorted(w.boundaries.begin(), w.boundaries.end()));
        CHECK(std::adjacent_find(w.boundaries.begin(), w.boundaries.end()) == w.boundaries.end());
        CHECK(w.boundaries.size() == 9);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(synthesize_walker({.period_mean = 0}), ConfigError);
        CHECK_THROWS_AS(synthesize_walker({.period_mean = 40, .period_jitter = 10}), ConfigError);
        CHECK_THROWS_AS(synthesize_walker({.cycles = 0}), ConfigError);
    }
}
