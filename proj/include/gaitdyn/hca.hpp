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
#include <string>
#include <vector>

namespace gaitdyn::hca {

enum class Linkage { Ward, Complete, Average };
enum class Scaling { None, ZScore };

const char* to_string(Linkage l) noexcept;
const char* to_string(Scaling s) noexcept;
Linkage parse_linkage(const std::string& name);
Scaling parse_scaling(const std::string& name);

/// One agglomeration step. Ids below the leaf count are leaves; the merge at
/// position i of the record creates node `leaves + i`.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;

    friend bool operator==(const Merge&, const Merge&) = default;
};

struct ClusterOptions {
    Linkage linkage = Linkage::Ward;
    Scaling scaling = Scaling::ZScore;
    /// Ward is centroid-based and needs O(N) memory; this is its column cap.
    std::size_t max_columns = 65536;
    /// Complete/average keep a condensed distance matrix; lower cap.
    std::size_t max_columns_matrix = 8192;

    friend bool operator==(const ClusterOptions&, const ClusterOptions&) = default;
};

/// Result of clustering the columns of a d x N matrix into H groups.
///
/// Cluster ids are ordered by descending size, ties by the first column
/// that belongs to the cluster. Centroids are in the input units; distances
/// are measured after the per-row scaling recorded in `center`/`scale`.
struct ColumnClustering {
    ClusterOptions options;
    std::size_t clusters = 0;
    std::vector<std::uint32_t> assignments;  ///< one id per input column
    Matrix centroids;                        ///< d x H
    std::vector<double> center;              ///< per-row offset applied before distances
    std::vector<double> scale;               ///< per-row divisor applied before distances
    std::size_t fit_stride = 1;              ///< every k-th column entered the agglomeration
    std::vector<Merge> linkage_record;       ///< over the fitted (sub-sampled) columns

    std::size_t dims() const noexcept { return centroids.rows(); }
    std::size_t fitted_leaves() const noexcept { return linkage_record.size() + 1; }

    friend bool operator==(const ColumnClustering&, const ColumnClustering&) = default;
};

ColumnClustering cluster_columns(const Matrix& matrix, std::size_t clusters, const ClusterOptions& options = {});

/// Nearest centroid (scaled Euclidean) for every column; ties go to the lower id.
std::vector<std::uint32_t> assign_nearest(const ColumnClustering& clustering, const Matrix& columns);

/// Agglomerative merge record over the columns of `points` (already scaled).
/// Heights are nondecreasing; ward heights are sqrt(2 * SSE increase).
std::vector<Merge> agglomerate(const Matrix& points, Linkage linkage);

/// Flat labels (first-occurrence numbering) after applying the first
/// `leaves - clusters` merges.
std::vector<std::uint32_t> cut_tree(const std::vector<Merge>& merges, std::size_t leaves, std::size_t clusters);

/// Dendrogram leaf order, left subtree first.
std::vector<std::size_t> leaf_order(const std::vector<Merge>& merges, std::size_t leaves);

std::string serialize(const ColumnClustering& clustering);
ColumnClustering deserialize_clustering(const std::string& text, const std::string& source = "<clustering>");

}  // namespace gaitdyn::hca
