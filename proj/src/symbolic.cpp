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

#include "gaitdyn/symbolic.hpp"

#include "gaitdyn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace gaitdyn::symbolic {

std::vector<double> resultant_acceleration(const SensorTriplet& triplet) {
    const auto& m = triplet.values();
    std::vector<double> out(m.cols());
    for (std::size_t t = 0; t < m.cols(); ++t) {
        out[t] = std::sqrt(m(0, t) * m(0, t) + m(1, t) * m(1, t) + m(2, t) * m(2, t));
    }
    return out;
}

double empirical_quantile(std::vector<double> values, double level) {
    if (values.empty()) throw PreconditionError("quantile of an empty pool");
    if (!(level >= 0.0 && level <= 1.0)) throw ConfigError(fmt::format("quantile level {} outside [0, 1]", level));
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

StateVectorSequence::StateVectorSequence(std::size_t dims, std::vector<std::uint8_t> letters)
    : dims_(dims), letters_(std::move(letters)) {
    if (dims_ == 0 || letters_.size() % dims_ != 0) {
        throw DataError(fmt::format("{} letters do not form {}-dimensional states", letters_.size(), dims_));
    }
    for (auto l : letters_) {
        if (l < 1 || l > 3) throw DataError(fmt::format("state letter {} outside {{1, 2, 3}}", l));
    }
}

std::vector<std::uint8_t> StateVectorSequence::dimension(std::size_t d) const {
    std::vector<std::uint8_t> out(length());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = letters_[t * dims_ + d];
    return out;
}

TernaryCoding fit_ternary(std::span<const TimeSeriesFrame> frames, double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 0.5 && beta > 0.5 && beta < 1.0)) {
        throw ConfigError(fmt::format("need 0 < alpha < 0.5 < beta < 1, got alpha={} beta={}", alpha, beta));
    }
    if (frames.empty()) throw PreconditionError("fit_ternary needs at least one frame");
    const auto& channels = frames.front().channels();
    for (const auto& f : frames) {
        if (f.channels() != channels) {
            throw DataError(fmt::format("frame of subject '{}' has a different channel list", f.subject_id()));
        }
    }
    TernaryCoding coding{alpha, beta, channels, {}};
    for (std::size_t d = 0; d < channels.size(); ++d) {
        std::vector<double> pool;
        for (const auto& f : frames) {
            const auto row = f.values().row(d);
            pool.insert(pool.end(), row.begin(), row.end());
        }
        std::sort(pool.begin(), pool.end());
        coding.cutoffs.push_back({empirical_quantile(pool, alpha), empirical_quantile(std::move(pool), beta)});
    }
    return coding;
}

std::vector<std::uint8_t> encode_ternary(std::span<const double> values, const Cutoffs& cutoffs) {
    std::vector<std::uint8_t> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return ternary_letter(v, cutoffs); });
    return out;
}

StateVectorSequence encode_ternary(const TimeSeriesFrame& frame, const TernaryCoding& coding) {
    if (frame.dims() != coding.cutoffs.size()) {
        throw DataError(fmt::format("frame has {} channels, coding has {}", frame.dims(), coding.cutoffs.size()));
    }
    if (!coding.channels.empty() && frame.channels() != coding.channels) {
        throw DataError("frame channels differ from the channels the coding was fitted on");
    }
    const std::size_t D = frame.dims();
    const std::size_t T = frame.length();
    std::vector<std::uint8_t> letters(D * T);
    for (std::size_t d = 0; d < D; ++d) {
        const auto row = frame.values().row(d);
        for (std::size_t t = 0; t < T; ++t) letters[t * D + d] = ternary_letter(row[t], coding.cutoffs[d]);
    }
    return StateVectorSequence(D, std::move(letters));
}

}  // namespace gaitdyn::symbolic
