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

#include "gaitdyn/complexity.hpp"
#include "gaitdyn/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace gaitdyn;
using gaitdyn::complexity::couple_naive;
using gaitdyn::complexity::lz76_complexity;

namespace {

std::vector<std::uint32_t> bits(const std::string& s) {
    std::vector<std::uint32_t> out;
    for (char c : s) out.push_back(static_cast<std::uint32_t>(c - '0'));
    return out;
}

std::vector<std::uint32_t> random_symbols(std::mt19937_64& rng, std::size_t n, std::uint32_t alphabet) {
    std::vector<std::uint32_t> v(n);
    for (auto& x : v) x = static_cast<std::uint32_t>(rng() % alphabet);
    return v;
}

}  // namespace

TEST_CASE("lz76 trivial cases") {
    CHECK(lz76_complexity(SymbolSequence({0}, 2)) == 1);
    for (std::size_t n : {2u, 3u, 10u, 500u}) {
        CHECK(lz76_complexity(SymbolSequence(std::vector<std::uint32_t>(n, 1), 2)) == 2);
    }
    CHECK_THROWS_AS(lz76_complexity(std::span<const std::uint32_t>{}), PreconditionError);
    CHECK_THROWS_AS(SymbolSequence({}, 2), PreconditionError);
    CHECK_THROWS_AS(SymbolSequence({0, 2}, 2), DataError);
}

TEST_CASE("lz76 on the classic binary example") {
    const auto s = bits("0001101001000101");
    // 0 | 001 | 10 | 100 | 1000 | 101
    REQUIRE(oracle::lz76_phrases(s) == 6);
    CHECK(lz76_complexity(s) == 6);
}

TEST_CASE("lz76 matches the phrase-parsing oracle on random strings") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto alphabet = static_cast<std::uint32_t>(2 + rng() % 26);
        const std::size_t n = 1 + rng() % 400;
        // Low-entropy strings exercise long copies.
        auto s = random_symbols(rng, n, trial % 3 == 0 ? 2 : alphabet);
        if (trial % 5 == 0) {
            for (std::size_t i = 8; i < n; ++i) s[i] = s[i % 8];
        }
        REQUIRE(lz76_complexity(s) == oracle::lz76_phrases(s));
    }
}

TEST_CASE("lz76 invariants") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng() % 8);
        const auto s = random_symbols(rng, 1 + rng() % 200, alphabet);

        std::vector<std::uint32_t> relabel(alphabet);
        std::iota(relabel.begin(), relabel.end(), 0u);
        std::shuffle(relabel.begin(), relabel.end(), rng);
        std::vector<std::uint32_t> renamed(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) renamed[i] = relabel[s[i]];
        CHECK(lz76_complexity(renamed) == lz76_complexity(s));

        auto joined = s;
        const auto tail = random_symbols(rng, 1 + rng() % 100, alphabet);
        joined.insert(joined.end(), tail.begin(), tail.end());
        CHECK(lz76_complexity(s) <= lz76_complexity(joined));
    }
}

TEST_CASE("couple_naive") {
    const std::vector<SymbolSequence> three{SymbolSequence({0, 1, 2}, 3), SymbolSequence({2, 2, 0}, 3),
                                            SymbolSequence({1, 0, 2}, 3)};
    const auto c = couple_naive(three);
    CHECK(c.alphabet_size() == 27);
    CHECK(c.provenance() == Provenance::Coupled);
    CHECK(std::vector<std::uint32_t>(c.symbols().begin(), c.symbols().end()) ==
          std::vector<std::uint32_t>{0 * 9 + 2 * 3 + 1, 1 * 9 + 2 * 3 + 0, 2 * 9 + 0 * 3 + 2});

    const std::vector<SymbolSequence> one{SymbolSequence({1, 0, 1}, 2)};
    CHECK(couple_naive(one) == one.front());

    // (0,1) (1,1) (1,0) (0,0) -> 1 3 2 0 over alphabet 4
    const std::vector<SymbolSequence> two{SymbolSequence({0, 1, 1, 0}, 2), SymbolSequence({1, 1, 0, 0}, 2)};
    const auto c2 = couple_naive(two);
    CHECK(c2.alphabet_size() == 4);
    CHECK(std::vector<std::uint32_t>(c2.symbols().begin(), c2.symbols().end()) == std::vector<std::uint32_t>{1, 3, 2, 0});

    const std::vector<SymbolSequence> ragged{SymbolSequence({0, 1}, 2), SymbolSequence({1}, 2)};
    CHECK_THROWS_AS(couple_naive(ragged), PreconditionError);
}
