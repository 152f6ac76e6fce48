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

#include "gaitdyn/hca.hpp"

#include "gaitdyn/error.hpp"
#include "gaitdyn/textio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gaitdyn::hca {

const char* to_string(Linkage l) noexcept {
    switch (l) {
        case Linkage::Ward: return "ward";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
    }
    return "ward";
}

const char* to_string(Scaling s) noexcept { return s == Scaling::ZScore ? "zscore" : "none"; }

Linkage parse_linkage(const std::string& name) {
    if (name == "ward") return Linkage::Ward;
    if (name == "complete") return Linkage::Complete;
    if (name == "average") return Linkage::Average;
    throw ConfigError(fmt::format("unknown linkage '{}' (ward, complete, average)", name));
}

Scaling parse_scaling(const std::string& name) {
    if (name == "zscore") return Scaling::ZScore;
    if (name == "none") return Scaling::None;
    throw ConfigError(fmt::format("unknown scaling '{}' (zscore, none)", name));
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Centroid form of Ward's criterion: no pairwise matrix, O(N) memory.
class WardState {
public:
    WardState(const Matrix& points) : dims_(points.rows()), centroid_(points.rows() * points.cols()), size_(points.cols(), 1) {
        for (std::size_t c = 0; c < points.cols(); ++c) {
            for (std::size_t r = 0; r < dims_; ++r) centroid_[c * dims_ + r] = points(r, c);
        }
    }

    double distance(std::size_t a, std::size_t b) const {
        const double* ca = &centroid_[a * dims_];
        const double* cb = &centroid_[b * dims_];
        double sq = 0.0;
        for (std::size_t r = 0; r < dims_; ++r) {
            const double diff = ca[r] - cb[r];
            sq += diff * diff;
        }
        const auto na = static_cast<double>(size_[a]);
        const auto nb = static_cast<double>(size_[b]);
        return na * nb / (na + nb) * sq;
    }

    double height(double distance) const { return std::sqrt(2.0 * distance); }

    void merge(std::size_t keep, std::size_t gone, const std::vector<std::size_t>&) {
        const auto nk = static_cast<double>(size_[keep]);
        const auto ng = static_cast<double>(size_[gone]);
        for (std::size_t r = 0; r < dims_; ++r) {
            double& c = centroid_[keep * dims_ + r];
            c = (nk * c + ng * centroid_[gone * dims_ + r]) / (nk + ng);
        }
        size_[keep] += size_[gone];
    }

    std::size_t size(std::size_t a) const { return size_[a]; }

private:
    std::size_t dims_;
    std::vector<double> centroid_;
    std::vector<std::size_t> size_;
};

// Condensed Euclidean matrix with Lance-Williams updates.
class MatrixState {
public:
    MatrixState(const Matrix& points, Linkage linkage)
        : n_(points.cols()), linkage_(linkage), dist_(n_ * (n_ - 1) / 2), size_(n_, 1) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                double sq = 0.0;
                for (std::size_t r = 0; r < points.rows(); ++r) {
                    const double diff = points(r, i) - points(r, j);
                    sq += diff * diff;
                }
                dist_[index(i, j)] = std::sqrt(sq);
            }
        }
    }

    double distance(std::size_t a, std::size_t b) const { return dist_[index(a, b)]; }
    double height(double distance) const { return distance; }

    void merge(std::size_t keep, std::size_t gone, const std::vector<std::size_t>& active) {
        const auto nk = static_cast<double>(size_[keep]);
        const auto ng = static_cast<double>(size_[gone]);
        for (std::size_t k : active) {
            if (k == keep || k == gone) continue;
            const double dk = dist_[index(k, keep)];
            const double dg = dist_[index(k, gone)];
            dist_[index(k, keep)] = linkage_ == Linkage::Complete ? std::max(dk, dg) : (nk * dk + ng * dg) / (nk + ng);
        }
        size_[keep] += size_[gone];
    }

    std::size_t size(std::size_t a) const { return size_[a]; }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return n_ * i - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t n_;
    Linkage linkage_;
    std::vector<double> dist_;
    std::vector<std::size_t> size_;
};

struct RawMerge {
    std::size_t a;
    std::size_t b;
    double height;
    std::size_t size;
};

// Nearest-neighbour chain. Reciprocal nearest neighbours are merged as soon as
// they are found; the record is put into height order afterwards.
template <class State>
std::vector<Merge> nn_chain(State& state, std::size_t n) {
    if (n == 0) throw PreconditionError("cannot cluster zero columns");
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::vector<std::size_t> position(n);
    std::iota(position.begin(), position.end(), std::size_t{0});
    std::vector<std::size_t> node(n);
    std::iota(node.begin(), node.end(), std::size_t{0});

    std::vector<RawMerge> raw;
    raw.reserve(n - 1);
    std::vector<std::size_t> chain;
    while (active.size() > 1) {
        if (chain.empty()) chain.push_back(*std::min_element(active.begin(), active.end()));
        const std::size_t a = chain.back();
        const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : kNone;

        std::size_t best = prev;
        double best_d = prev == kNone ? std::numeric_limits<double>::infinity() : state.distance(a, prev);
        for (std::size_t k : active) {
            if (k == a || k == prev) continue;
            const double d = state.distance(a, k);
            if (d < best_d || (d == best_d && best != prev && k < best)) {
                best = k;
                best_d = d;
            }
        }

        if (best != prev) {
            chain.push_back(best);
            continue;
        }
        chain.pop_back();
        chain.pop_back();
        const std::size_t keep = std::min(a, prev);
        const std::size_t gone = std::max(a, prev);
        state.merge(keep, gone, active);
        raw.push_back({node[a], node[prev], state.height(best_d), state.size(keep)});
        node[keep] = n + raw.size() - 1;

        const std::size_t pos = position[gone];
        active[pos] = active.back();
        position[active[pos]] = pos;
        active.pop_back();
    }

    // Children never sit above parents, even after rounding.
    for (auto& m : raw) {
        for (std::size_t child : {m.a, m.b}) {
            if (child >= n) m.height = std::max(m.height, raw[child - n].height);
        }
    }
    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return raw[x].height < raw[y].height; });
    std::vector<std::size_t> final_id(raw.size());
    for (std::size_t i = 0; i < order.size(); ++i) final_id[order[i]] = n + i;
    const auto remap = [&](std::size_t id) { return id < n ? id : final_id[id - n]; };

    std::vector<Merge> merges;
    merges.reserve(raw.size());
    for (std::size_t i : order) {
        const std::size_t x = remap(raw[i].a);
        const std::size_t y = remap(raw[i].b);
        merges.push_back({std::min(x, y), std::max(x, y), raw[i].height, raw[i].size});
    }
    return merges;
}

// Column-major copy of `m` after subtracting center and dividing by scale.
Matrix scaled_columns(const Matrix& m, const std::vector<std::size_t>& cols, const std::vector<double>& center,
                      const std::vector<double>& scale) {
    Matrix out(m.rows(), cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t r = 0; r < m.rows(); ++r) out(r, i) = (m(r, cols[i]) - center[r]) / scale[r];
    }
    return out;
}

std::uint32_t nearest(const Matrix& scaled_centroids, const double* x) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < scaled_centroids.cols(); ++h) {
        double sq = 0.0;
        for (std::size_t r = 0; r < scaled_centroids.rows(); ++r) {
            const double diff = x[r] - scaled_centroids(r, h);
            sq += diff * diff;
        }
        if (sq < best_d) {
            best_d = sq;
            best = static_cast<std::uint32_t>(h);
        }
    }
    return best;
}

Matrix mean_columns(const Matrix& m, const std::vector<std::uint32_t>& labels, std::size_t clusters) {
    Matrix sums(m.rows(), clusters);
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        ++counts[labels[c]];
        for (std::size_t r = 0; r < m.rows(); ++r) sums(r, labels[c]) += m(r, c);
    }
    for (std::size_t h = 0; h < clusters; ++h) {
        for (std::size_t r = 0; r < m.rows(); ++r) sums(r, h) /= static_cast<double>(counts[h]);
    }
    return sums;
}

}  // namespace

std::vector<Merge> agglomerate(const Matrix& points, Linkage linkage) {
    if (linkage == Linkage::Ward) {
        WardState state(points);
        return nn_chain(state, points.cols());
    }
    MatrixState state(points, linkage);
    return nn_chain(state, points.cols());
}

std::vector<std::uint32_t> cut_tree(const std::vector<Merge>& merges, std::size_t leaves, std::size_t clusters) {
    if (clusters < 1 || clusters > leaves) {
        throw PreconditionError(fmt::format("cannot cut {} leaves into {} clusters", leaves, clusters));
    }
    if (merges.size() + 1 != leaves) throw DataError("merge record does not match leaf count");
    std::vector<std::size_t> parent(leaves);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::size_t> representative(leaves + merges.size());
    std::iota(representative.begin(), representative.begin() + static_cast<std::ptrdiff_t>(leaves), std::size_t{0});
    for (std::size_t i = 0; i < leaves - clusters; ++i) {
        const std::size_t a = find(representative[merges[i].left]);
        const std::size_t b = find(representative[merges[i].right]);
        parent[std::max(a, b)] = std::min(a, b);
        representative[leaves + i] = std::min(a, b);
    }
    std::vector<std::uint32_t> labels(leaves);
    std::vector<std::uint32_t> label_of_root(leaves, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < leaves; ++i) {
        auto& l = label_of_root[find(i)];
        if (l == std::numeric_limits<std::uint32_t>::max()) l = next++;
        labels[i] = l;
    }
    return labels;
}

std::vector<std::size_t> leaf_order(const std::vector<Merge>& merges, std::size_t leaves) {
    if (leaves == 0) return {};
    if (merges.size() + 1 != leaves) throw DataError("merge record does not match leaf count");
    std::vector<std::size_t> order;
    order.reserve(leaves);
    std::vector<std::size_t> stack{leaves + merges.size() - 1};
    while (!stack.empty()) {
        const std::size_t id = stack.back();
        stack.pop_back();
        if (id < leaves) {
            order.push_back(id);
        } else {
            const auto& m = merges[id - leaves];
            stack.push_back(m.right);
            stack.push_back(m.left);
        }
    }
    return order;
}

ColumnClustering cluster_columns(const Matrix& matrix, std::size_t clusters, const ClusterOptions& options) {
    const std::size_t d = matrix.rows();
    const std::size_t n = matrix.cols();
    if (d == 0 || n == 0) throw PreconditionError("cannot cluster an empty matrix");
    if (clusters < 1 || clusters > n) {
        throw PreconditionError(fmt::format("cluster count {} outside [1, {}]", clusters, n));
    }

    ColumnClustering out;
    out.options = options;
    out.clusters = clusters;
    out.center.assign(d, 0.0);
    out.scale.assign(d, 1.0);
    if (options.scaling == Scaling::ZScore) {
        for (std::size_t r = 0; r < d; ++r) {
            const auto row = matrix.row(r);
            const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(n);
            double ss = 0.0;
            for (double v : row) ss += (v - mean) * (v - mean);
            const double sd = std::sqrt(ss / static_cast<double>(n));
            out.center[r] = mean;
            out.scale[r] = sd > 0.0 ? sd : 1.0;
        }
    }

    const std::size_t cap = options.linkage == Linkage::Ward ? options.max_columns : options.max_columns_matrix;
    if (cap == 0) throw ConfigError("column cap must be positive");
    out.fit_stride = (n + cap - 1) / cap;
    std::vector<std::size_t> fit_cols;
    for (std::size_t c = 0; c < n; c += out.fit_stride) fit_cols.push_back(c);
    if (clusters > fit_cols.size()) {
        throw PreconditionError(fmt::format("cluster count {} exceeds {} sub-sampled columns", clusters, fit_cols.size()));
    }

    const Matrix fit_points = scaled_columns(matrix, fit_cols, out.center, out.scale);
    out.linkage_record = agglomerate(fit_points, options.linkage);
    const auto fit_labels = cut_tree(out.linkage_record, fit_cols.size(), clusters);

    std::vector<std::uint32_t> labels(n);
    if (out.fit_stride == 1) {
        labels = fit_labels;
    } else {
        const Matrix fit_centroids = mean_columns(fit_points, fit_labels, clusters);
        std::vector<double> x(d);
        for (std::size_t c = 0; c < n; ++c) {
            if (c % out.fit_stride == 0) {
                labels[c] = fit_labels[c / out.fit_stride];
                continue;
            }
            for (std::size_t r = 0; r < d; ++r) x[r] = (matrix(r, c) - out.center[r]) / out.scale[r];
            labels[c] = nearest(fit_centroids, x.data());
        }
    }

    // Relabel: largest cluster first, ties by first occurrence.
    std::vector<std::size_t> count(clusters, 0);
    std::vector<std::size_t> first(clusters, n);
    for (std::size_t c = 0; c < n; ++c) {
        ++count[labels[c]];
        first[labels[c]] = std::min(first[labels[c]], c);
    }
    std::vector<std::uint32_t> by_size(clusters);
    std::iota(by_size.begin(), by_size.end(), 0u);
    std::sort(by_size.begin(), by_size.end(), [&](std::uint32_t a, std::uint32_t b) {
        return count[a] != count[b] ? count[a] > count[b] : first[a] < first[b];
    });
    std::vector<std::uint32_t> new_id(clusters);
    for (std::uint32_t i = 0; i < clusters; ++i) new_id[by_size[i]] = i;
    for (auto& l : labels) l = new_id[l];

    out.centroids = mean_columns(matrix, labels, clusters);
    out.assignments = std::move(labels);
    return out;
}

std::vector<std::uint32_t> assign_nearest(const ColumnClustering& clustering, const Matrix& columns) {
    const std::size_t d = clustering.dims();
    if (columns.rows() != d) {
        throw DataError(fmt::format("columns have dimension {}, clustering has {}", columns.rows(), d));
    }
    Matrix scaled_centroids(d, clustering.clusters);
    for (std::size_t h = 0; h < clustering.clusters; ++h) {
        for (std::size_t r = 0; r < d; ++r) {
            scaled_centroids(r, h) = (clustering.centroids(r, h) - clustering.center[r]) / clustering.scale[r];
        }
    }
    std::vector<std::uint32_t> out(columns.cols());
    std::vector<double> x(d);
    for (std::size_t c = 0; c < columns.cols(); ++c) {
        for (std::size_t r = 0; r < d; ++r) x[r] = (columns(r, c) - clustering.center[r]) / clustering.scale[r];
        out[c] = nearest(scaled_centroids, x.data());
    }
    return out;
}

namespace {
constexpr const char* kMagic = "gaitdyn-clustering";
constexpr int kVersion = 1;

void append_values(std::string& out, const char* key, std::span<const double> values) {
    out += key;
    for (double v : values) out += ' ' + format_double(v);
    out += '\n';
}
}  // namespace

std::string serialize(const ColumnClustering& c) {
    std::string out = fmt::format("{} {}\n", kMagic, kVersion);
    out += fmt::format("linkage {}\nscaling {}\n", to_string(c.options.linkage), to_string(c.options.scaling));
    out += fmt::format("max_columns {} {}\n", c.options.max_columns, c.options.max_columns_matrix);
    out += fmt::format("dims {}\ncolumns {}\nclusters {}\nfit_stride {}\n", c.dims(), c.assignments.size(), c.clusters,
                       c.fit_stride);
    append_values(out, "center", c.center);
    append_values(out, "scale", c.scale);
    for (std::size_t h = 0; h < c.clusters; ++h) {
        out += fmt::format("centroid {}", h);
        for (std::size_t r = 0; r < c.dims(); ++r) out += ' ' + format_double(c.centroids(r, h));
        out += '\n';
    }
    out += fmt::format("merges {}\n", c.linkage_record.size());
    for (const auto& m : c.linkage_record) {
        out += fmt::format("{} {} {} {}\n", m.left, m.right, format_double(m.height), m.size);
    }
    out += fmt::format("assignments {}\n", c.assignments.size());
    for (std::size_t i = 0; i < c.assignments.size(); ++i) {
        out += fmt::format("{}", c.assignments[i]);
        out += (i % 64 == 63 || i + 1 == c.assignments.size()) ? '\n' : ' ';
    }
    out += "end\n";
    return out;
}

ColumnClustering deserialize_clustering(const std::string& text, const std::string& source) {
    LineReader in(text, source);
    const auto magic = in.next_fields();
    if (magic.size() != 2 || magic[0] != kMagic) in.fail("not a clustering file");
    if (to_int(magic[1], in) != kVersion) in.fail(fmt::format("unsupported clustering version {}", magic[1]));

    const auto single = [&](const char* key) {
        const auto f = in.expect(key);
        if (f.size() != 1) in.fail(fmt::format("'{}' takes one value", key));
        return f[0];
    };
    const auto count = [&](const char* key) {
        const auto v = to_int(single(key), in);
        if (v < 0) in.fail(fmt::format("'{}' must be nonnegative", key));
        return static_cast<std::size_t>(v);
    };

    ColumnClustering c;
    try {
        c.options.linkage = parse_linkage(single("linkage"));
        c.options.scaling = parse_scaling(single("scaling"));
    } catch (const ConfigError& e) {
        in.fail(e.what());
    }
    const auto caps = in.expect("max_columns");
    if (caps.size() != 2) in.fail("'max_columns' takes two values");
    c.options.max_columns = static_cast<std::size_t>(to_int(caps[0], in));
    c.options.max_columns_matrix = static_cast<std::size_t>(to_int(caps[1], in));
    const std::size_t dims = count("dims");
    const std::size_t columns = count("columns");
    c.clusters = count("clusters");
    c.fit_stride = count("fit_stride");
    if (dims == 0 || c.clusters == 0 || c.fit_stride == 0) in.fail("dims, clusters and fit_stride must be positive");

    const auto read_row = [&](const char* key, std::size_t skip) {
        const auto f = in.expect(key);
        if (f.size() != dims + skip) in.fail(fmt::format("'{}' needs {} values", key, dims));
        std::vector<double> v;
        for (std::size_t i = skip; i < f.size(); ++i) v.push_back(to_double(f[i], in));
        return v;
    };
    c.center = read_row("center", 0);
    c.scale = read_row("scale", 0);
    c.centroids = Matrix(dims, c.clusters);
    for (std::size_t h = 0; h < c.clusters; ++h) {
        const auto v = read_row("centroid", 1);
        for (std::size_t r = 0; r < dims; ++r) c.centroids(r, h) = v[r];
    }
    const std::size_t merges = count("merges");
    for (std::size_t i = 0; i < merges; ++i) {
        const auto f = in.next_fields();
        if (f.size() != 4) in.fail("merge lines have 4 fields");
        c.linkage_record.push_back({static_cast<std::size_t>(to_int(f[0], in)), static_cast<std::size_t>(to_int(f[1], in)),
                                    to_double(f[2], in), static_cast<std::size_t>(to_int(f[3], in))});
    }
    if (count("assignments") != columns) in.fail("assignment count differs from column count");
    while (c.assignments.size() < columns) {
        for (const auto& f : in.next_fields()) {
            const auto v = to_int(f, in);
            if (v < 0 || static_cast<std::size_t>(v) >= c.clusters) in.fail(fmt::format("cluster id {} out of range", f));
            c.assignments.push_back(static_cast<std::uint32_t>(v));
        }
    }
    if (c.assignments.size() != columns) in.fail("too many assignments");
    if (in.next_fields() != std::vector<std::string>{"end"}) in.fail("missing 'end'");
    return c;
}

}  // namespace gaitdyn::hca
