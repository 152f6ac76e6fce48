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

#include "gaitdyn/frame.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gaitdyn::symbolic {

/// Euclidean norm of every column of an X/Y/Z triplet.
std::vector<double> resultant_acceleration(const SensorTriplet& triplet);

/// Sort-based empirical quantile with linear interpolation between order
/// statistics ("type 7"): h = (n - 1) * level, x[floor(h)] + frac(h) * gap.
double empirical_quantile(std::vector<double> values, double level);

struct Cutoffs {
    double lower = 0.0;  ///< value at the alpha quantile
    double upper = 0.0;  ///< value at the beta quantile
};

/// Per-dimension three-letter quantile coding.
struct TernaryCoding {
    double alpha = 0.3;
    double beta = 0.7;
    std::vector<Channel> channels;
    std::vector<Cutoffs> cutoffs;  ///< parallel to channels
};

/// Letter for one value: 1 at or below `lower`, 2 up to and including
/// `upper`, 3 above.
inline std::uint8_t ternary_letter(double v, const Cutoffs& c) noexcept {
    return v <= c.lower ? 1 : (v <= c.upper ? 2 : 3);
}

/// Time-major sequence of D-tuples over {1, 2, 3}.
class StateVectorSequence {
public:
    StateVectorSequence() = default;
    StateVectorSequence(std::size_t dims, std::vector<std::uint8_t> letters);

    std::size_t dims() const noexcept { return dims_; }
    std::size_t length() const noexcept { return dims_ ? letters_.size() / dims_ : 0; }
    std::span<const std::uint8_t> state(std::size_t t) const { return {letters_.data() + t * dims_, dims_}; }
    std::span<const std::uint8_t> letters() const noexcept { return letters_; }

    /// Letters of dimension d over time.
    std::vector<std::uint8_t> dimension(std::size_t d) const;

    friend bool operator==(const StateVectorSequence&, const StateVectorSequence&) = default;

private:
    std::size_t dims_ = 0;
    std::vector<std::uint8_t> letters_;
};

/// Fits cutoffs on the values of each channel pooled over all frames.
TernaryCoding fit_ternary(std::span<const TimeSeriesFrame> frames, double alpha, double beta);

StateVectorSequence encode_ternary(const TimeSeriesFrame& frame, const TernaryCoding& coding);

/// One-dimensional variant used for scalar series (e.g. a single axis).
std::vector<std::uint8_t> encode_ternary(std::span<const double> values, const Cutoffs& cutoffs);

}  // namespace gaitdyn::symbolic
