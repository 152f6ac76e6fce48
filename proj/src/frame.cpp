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

#include "gaitdyn/frame.hpp"

#include "gaitdyn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace gaitdyn {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return "config";
        case ErrorKind::Data: return "data";
        case ErrorKind::Precondition: return "precondition";
    }
    return "unknown";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DataError(fmt::format("matrix data has {} values, expected {}x{}", data_.size(), rows_, cols_));
    }
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::column_range(std::size_t begin, std::size_t end) const {
    if (begin > end || end > cols_) {
        throw PreconditionError(fmt::format("column range [{}, {}) outside [0, {})", begin, end, cols_));
    }
    Matrix out(rows_, end - begin);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::copy(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_ + begin),
                  data_.begin() + static_cast<std::ptrdiff_t>(r * cols_ + end), out.row(r).begin());
    }
    return out;
}

char axis_name(Axis a) noexcept {
    switch (a) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

TimeSeriesFrame::TimeSeriesFrame(Matrix values, std::vector<Channel> channels, double sample_rate_hz,
                                 std::string subject_id, std::string activity)
    : values_(std::move(values)),
      channels_(std::move(channels)),
      sample_rate_hz_(sample_rate_hz),
      subject_id_(std::move(subject_id)),
      activity_(std::move(activity)) {
    if (values_.rows() == 0 || values_.cols() == 0) {
        throw DataError("time series frame needs at least one channel and one sample");
    }
    if (channels_.size() != values_.rows()) {
        throw DataError(fmt::format("{} channel labels for {} rows", channels_.size(), values_.rows()));
    }
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
        throw DataError(fmt::format("sample rate must be positive, got {}", sample_rate_hz_));
    }
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        for (std::size_t j = i + 1; j < channels_.size(); ++j) {
            if (channels_[i] == channels_[j]) {
                throw DataError(fmt::format("duplicate channel {}_{}", channels_[i].sensor,
                                            axis_name(channels_[i].axis)));
            }
        }
    }
    for (std::size_t r = 0; r < values_.rows(); ++r) {
        const auto row = values_.row(r);
        const auto bad = std::find_if(row.begin(), row.end(), [](double v) { return !std::isfinite(v); });
        if (bad != row.end()) {
            throw DataError(fmt::format("non-finite value in channel {}_{} at sample {}", channels_[r].sensor,
                                        axis_name(channels_[r].axis), bad - row.begin()));
        }
    }
}

std::size_t TimeSeriesFrame::channel_index(const std::string& sensor, Axis axis) const {
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        if (channels_[i].sensor == sensor && channels_[i].axis == axis) return i;
    }
    throw DataError(fmt::format("channel {}_{} not present", sensor, axis_name(axis)));
}

std::vector<std::string> TimeSeriesFrame::sensors() const {
    std::vector<std::string> out;
    for (const auto& ch : channels_) {
        if (std::find(out.begin(), out.end(), ch.sensor) == out.end()) out.push_back(ch.sensor);
    }
    return out;
}

TimeSeriesFrame TimeSeriesFrame::slice(std::size_t begin, std::size_t end) const {
    return TimeSeriesFrame(values_.column_range(begin, end), channels_, sample_rate_hz_, subject_id_, activity_);
}

TimeSeriesFrame TimeSeriesFrame::select(const std::vector<Channel>& channels) const {
    Matrix out(channels.size(), length());
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto src = values_.row(channel_index(channels[i].sensor, channels[i].axis));
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return TimeSeriesFrame(std::move(out), channels, sample_rate_hz_, subject_id_, activity_);
}

SensorTriplet::SensorTriplet(TimeSeriesFrame frame) : frame_(std::move(frame)) {
    const auto& ch = frame_.channels();
    if (ch.size() != 3) {
        throw DataError(fmt::format("sensor triplet needs exactly 3 channels, got {}", ch.size()));
    }
    const Axis expected[3] = {Axis::X, Axis::Y, Axis::Z};
    for (std::size_t i = 0; i < 3; ++i) {
        if (ch[i].sensor != ch[0].sensor) {
            throw DataError(fmt::format("sensor triplet mixes sensors {} and {}", ch[0].sensor, ch[i].sensor));
        }
        if (ch[i].axis != expected[i]) {
            throw DataError(fmt::format("sensor triplet for {} must be ordered X, Y, Z", ch[0].sensor));
        }
    }
}

SensorTriplet SensorTriplet::from_frame(const TimeSeriesFrame& frame, const std::string& sensor) {
    return SensorTriplet(frame.select({{sensor, Axis::X}, {sensor, Axis::Y}, {sensor, Axis::Z}}));
}

}  // namespace gaitdyn
