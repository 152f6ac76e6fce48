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
#include <span>
#include <string>
#include <vector>

namespace gaitdyn {

/// Dense row-major real matrix. Rows are channels/dimensions, columns are time.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    /// Copy of column c (length rows()).
    std::vector<double> column(std::size_t c) const;

    /// Columns [begin, end) as a new matrix.
    Matrix column_range(std::size_t begin, std::size_t end) const;

    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class Axis { X, Y, Z };

char axis_name(Axis a) noexcept;

struct Channel {
    std::string sensor;
    Axis axis = Axis::X;

    friend bool operator==(const Channel&, const Channel&) = default;
};

/// D-channel acceleration recording on a uniform time grid.
///
/// Construction validates: D >= 1, T >= 1, all values finite, no duplicate
/// channels and a positive sample rate. Instances are immutable afterwards.
class TimeSeriesFrame {
public:
    TimeSeriesFrame(Matrix values, std::vector<Channel> channels, double sample_rate_hz,
                    std::string subject_id = {}, std::string activity = {});

    const Matrix& values() const noexcept { return values_; }
    const std::vector<Channel>& channels() const noexcept { return channels_; }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }
    const std::string& subject_id() const noexcept { return subject_id_; }
    const std::string& activity() const noexcept { return activity_; }

    std::size_t dims() const noexcept { return values_.rows(); }
    std::size_t length() const noexcept { return values_.cols(); }

    /// Index of a channel, or throws DataError when absent.
    std::size_t channel_index(const std::string& sensor, Axis axis) const;

    /// Distinct sensor names in channel order.
    std::vector<std::string> sensors() const;

    /// Samples [begin, end) of every channel.
    TimeSeriesFrame slice(std::size_t begin, std::size_t end) const;

    /// Rows matching `channels`, in that order.
    TimeSeriesFrame select(const std::vector<Channel>& channels) const;

    friend bool operator==(const TimeSeriesFrame&, const TimeSeriesFrame&) = default;

private:
    Matrix values_;
    std::vector<Channel> channels_;
    double sample_rate_hz_;
    std::string subject_id_;
    std::string activity_;
};

/// The X, Y, Z rows of one sensor.
class SensorTriplet {
public:
    explicit SensorTriplet(TimeSeriesFrame frame);

    /// Extracts the X/Y/Z rows of `sensor` from a multi-sensor frame.
    static SensorTriplet from_frame(const TimeSeriesFrame& frame, const std::string& sensor);

    const TimeSeriesFrame& frame() const noexcept { return frame_; }
    const std::string& sensor() const noexcept { return frame_.channels().front().sensor; }
    std::size_t length() const noexcept { return frame_.length(); }
    const Matrix& values() const noexcept { return frame_.values(); }

private:
    TimeSeriesFrame frame_;
};

}  // namespace gaitdyn
