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

#include <fmt/format.h>

#include <algorithm>
#include <limits>

namespace gaitdyn {

const char* to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::Ternary: return "ternary";
        case Provenance::HcaCluster: return "hca-cluster";
        case Provenance::Coupled: return "coupled";
        case Provenance::Other: return "other";
    }
    return "other";
}

SymbolSequence::SymbolSequence(std::vector<std::uint32_t> symbols, std::uint32_t alphabet_size, Provenance provenance)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size), provenance_(provenance) {
    if (symbols_.empty()) throw PreconditionError("symbol sequence must not be empty");
    const auto big = std::find_if(symbols_.begin(), symbols_.end(), [&](auto s) { return s >= alphabet_size_; });
    if (big != symbols_.end()) {
        throw DataError(fmt::format("symbol {} at position {} exceeds alphabet size {}", *big, big - symbols_.begin(),
                                    alphabet_size_));
    }
}

SymbolSequence from_ternary(std::span<const std::uint8_t> letters) {
    std::vector<std::uint32_t> symbols(letters.size());
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (letters[i] < 1 || letters[i] > 3) throw DataError(fmt::format("ternary letter {} outside 1..3", letters[i]));
        symbols[i] = letters[i] - 1u;
    }
    return SymbolSequence(std::move(symbols), 3, Provenance::Ternary);
}

namespace complexity {

std::size_t lz76_complexity(std::span<const std::uint32_t> s) {
    const std::size_t n = s.size();
    if (n == 0) throw PreconditionError("LZ complexity of an empty sequence");
    if (n == 1) return 1;

    // i: start of the candidate copy source; l: length of the parsed prefix;
    // k: current match length; k_max: longest match seen for this phrase.
    std::size_t c = 1;
    std::size_t l = 1;
    std::size_t i = 0;
    std::size_t k = 1;
    std::size_t k_max = 1;
    while (true) {
        if (s[i + k - 1] == s[l + k - 1]) {
            ++k;
            if (l + k > n) {
                ++c;
                break;
            }
        } else {
            k_max = std::max(k, k_max);
            ++i;
            if (i == l) {
                ++c;
                l += k_max;
                if (l + 1 > n) break;
                i = 0;
                k = 1;
                k_max = 1;
            } else {
                k = 1;
            }
        }
    }
    return c;
}

std::size_t lz76_complexity(const SymbolSequence& seq) { return lz76_complexity(seq.symbols()); }

SymbolSequence couple_naive(std::span<const SymbolSequence> seqs) {
    if (seqs.empty()) throw PreconditionError("couple_naive needs at least one sequence");
    const std::size_t n = seqs.front().size();
    std::uint64_t alphabet = 1;
    for (const auto& s : seqs) {
        if (s.size() != n) {
            throw PreconditionError(fmt::format("cannot couple sequences of lengths {} and {}", n, s.size()));
        }
        alphabet *= s.alphabet_size();
        if (alphabet > std::numeric_limits<std::uint32_t>::max()) {
            throw PreconditionError("coupled alphabet does not fit in 32 bits");
        }
    }
    if (seqs.size() == 1) return seqs.front();

    std::vector<std::uint32_t> out(n, 0);
    for (const auto& s : seqs) {
        for (std::size_t t = 0; t < n; ++t) out[t] = out[t] * s.alphabet_size() + s[t];
    }
    return SymbolSequence(std::move(out), static_cast<std::uint32_t>(alphabet), Provenance::Coupled);
}

}  // namespace complexity
}  // namespace gaitdyn
