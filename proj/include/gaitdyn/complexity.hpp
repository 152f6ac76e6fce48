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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gaitdyn {

enum class Provenance { Ternary, HcaCluster, Coupled, Other };

const char* to_string(Provenance p) noexcept;

/// Finite-alphabet sequence: every symbol < alphabet_size, length >= 1.
class SymbolSequence {
public:
    SymbolSequence(std::vector<std::uint32_t> symbols, std::uint32_t alphabet_size,
                   Provenance provenance = Provenance::Other);

    std::span<const std::uint32_t> symbols() const noexcept { return symbols_; }
    std::uint32_t alphabet_size() const noexcept { return alphabet_size_; }
    Provenance provenance() const noexcept { return provenance_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    std::uint32_t operator[](std::size_t i) const { return symbols_[i]; }

    friend bool operator==(const SymbolSequence&, const SymbolSequence&) = default;

private:
    std::vector<std::uint32_t> symbols_;
    std::uint32_t alphabet_size_;
    Provenance provenance_;
};

/// Ternary letters {1,2,3} as symbols {0,1,2}.
SymbolSequence from_ternary(std::span<const std::uint8_t> letters);

namespace complexity {

/// Lempel-Ziv (1976) complexity: number of phrases in the exhaustive
/// production history, computed with the Kaspar-Schuster scan. A trailing
/// incomplete phrase counts as one phrase; the count is not normalized.
std::size_t lz76_complexity(const SymbolSequence& seq);
std::size_t lz76_complexity(std::span<const std::uint32_t> symbols);

/// Mixed-radix product coding of aligned sequences. The first sequence is the
/// most significant digit; the alphabet is the product of the input alphabets.
SymbolSequence couple_naive(std::span<const SymbolSequence> seqs);

}  // namespace complexity
}  // namespace gaitdyn
