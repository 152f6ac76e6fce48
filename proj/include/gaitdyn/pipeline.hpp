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

// End-to-end stages shared by the command line tool and the acceptance runner.

#include "gaitdyn/complexity.hpp"
#include "gaitdyn/frame.hpp"
#include "gaitdyn/hca.hpp"
#include "gaitdyn/l1g2.hpp"
#include "gaitdyn/landmark.hpp"
#include "gaitdyn/passtensor.hpp"
#include "gaitdyn/pssa.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gaitdyn::pipeline {

using Window = std::pair<std::size_t, std::size_t>;  ///< [begin, end) in samples

// ---- coding comparison on one sensor

struct ComplexityOptions {
    double alpha = 0.3;
    double beta = 0.7;
    std::vector<std::size_t> clusters{27};  ///< one hca row per entry
    hca::ClusterOptions cluster;
};

struct ComplexityRow {
    std::string label;
    std::uint32_t alphabet = 0;
    std::size_t length = 0;
    std::size_t lz = 0;
};

struct ComplexityResult {
    std::string sensor;
    std::vector<ComplexityRow> rows;
    std::vector<std::vector<std::uint32_t>> sequences;  ///< parallel to rows
};

/// Rows: per-axis ternary codes, their naive 27-state coupling, the ternary
/// code of the resultant acceleration, then one hca coding per cluster count.
ComplexityResult complexity_study(const SensorTriplet& triplet, const ComplexityOptions& options);
std::string complexity_table(const ComplexityResult& result);

// ---- PSSA

struct PssaOptions {
    double alpha = 0.3;
    double beta = 0.7;
    std::size_t pss_count = 300;
    std::optional<double> coverage;  ///< when set, overrides pss_count
    std::size_t segment_length = 1000;
    std::size_t max_keys = 10;
};

struct PssaTrainResult {
    pssa::PssaModel model;
    pssa::SystemStateTable table;
    pssa::ProportionMatrix sigma;
    pssa::ProportionMatrix train;
    pssa::ProportionMatrix test;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
};

/// One frame per subject, all with the same channels. Segments alternate
/// between train and test within each subject.
PssaTrainResult train_pssa(std::span<const TimeSeriesFrame> frames, const PssaOptions& options);
std::string pssa_report(const PssaTrainResult& result);
/// Columns n, pool-size coverage, distinct-state coverage.
std::string coverage_csv(const pssa::SystemStateTable& table);

struct Prediction {
    std::string subject_id;  ///< recording label
    std::size_t segment_index = 0;
    pssa::Classification result;
};

std::vector<Prediction> classify_frames(const pssa::PssaModel& model, std::span<const TimeSeriesFrame> frames);
std::string predictions_csv(const std::vector<Prediction>& predictions);
double prediction_accuracy(const std::vector<Prediction>& predictions);

// ---- L1G2 coding and cycle partition

struct CycleOptions {
    std::vector<std::string> feet{"LF", "RF"};  ///< share one code book
    std::vector<std::string> body;              ///< one code book each
    std::size_t feet_clusters = l1g2::kDefaultFeetClusters;
    std::size_t body_clusters = l1g2::kDefaultBodyClusters;
    hca::ClusterOptions cluster;
    std::optional<Window> window;
    std::size_t min_runs = landmark::kDefaultMinRuns;
    double recurrence_weight = 1.0;
};

struct CycleResult {
    std::vector<l1g2::LocalCode> codes;
    l1g2::CoupledStateSequence seq;
    landmark::RunStatistics stats;
    landmark::CyclePartition partition;
    std::string code_book_id;
    double sample_rate_hz = 0.0;
};

/// Fits code books on the (windowed) frame, or reuses `frozen` ones matched
/// by label, then couples and partitions.
CycleResult run_cycles(const TimeSeriesFrame& frame, const CycleOptions& options,
                       std::span<const l1g2::LocalCode> frozen = {});
/// The id of a single book, otherwise a digest of the member ids in order.
std::string combined_code_book_id(std::span<const l1g2::LocalCode> codes);
std::string cycles_report(const CycleResult& result);

}  // namespace gaitdyn::pipeline
