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
#include "gaitdyn/svg.hpp"

#include <doctest.h>

#include <set>

using namespace gaitdyn;

TEST_CASE("palettes") {
    const auto p = svg::default_palette(60);
    CHECK(std::set<std::string>(p.begin(), p.end()).size() == 60);
    for (const auto& c : p) CHECK(c.size() == 7);
    CHECK(svg::parse_palette("#000000, #A0b1c2") == svg::Palette{"#000000", "#A0b1c2"});
    CHECK_THROWS_AS(svg::parse_palette("#000000,red"), ConfigError);
    const std::vector<std::uint32_t> codes{0, 2};
    CHECK_THROWS_AS(svg::require_palette(svg::default_palette(2), codes), PreconditionError);
    CHECK_NOTHROW(svg::require_palette(svg::default_palette(3), codes));
}

TEST_CASE("number formatting and escaping") {
    CHECK(svg::num(-0.0001) == "0.000");
    CHECK(svg::num(1.23456) == "1.235");
    CHECK(svg::escape("a<b & \"c\"") == "a&lt;b &amp; &quot;c&quot;");
}

TEST_CASE("heat map and code strips are deterministic") {
    const std::vector<std::vector<double>> v{{0.1, 0.9}, {0.5, 0.0}, {0.3, 0.3}};
    const std::vector<std::size_t> rows{2, 0, 1}, cols{1, 0};
    const auto a = svg::heatmap(v, rows, cols, {"r0", "r1", "r2"}, {"c0", "c1"}, "t");
    CHECK(a == svg::heatmap(v, rows, cols, {"r0", "r1", "r2"}, {"c0", "c1"}, "t"));
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.rfind("</svg>\n") == a.size() - 7);
    // the first drawn row is r2
    CHECK(a.find(">r2<") < a.find(">r0<"));

    const auto s = svg::code_strips({{0, 0, 1, 2}, {3, 3, 3, 3}}, {"x", "y"}, svg::default_palette(4), "codes");
    // background + 3 runs + 1 run
    std::size_t rects = 0;
    for (auto p = s.find("<rect"); p != std::string::npos; p = s.find("<rect", p + 1)) ++rects;
    CHECK(rects == 5);
    CHECK_THROWS_AS(svg::code_strips({{0, 5}}, {"x"}, svg::default_palette(4), ""), PreconditionError);
}
