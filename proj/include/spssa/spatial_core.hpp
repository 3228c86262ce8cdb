#pragma once
//
// Locations, partitions, spatial kernels and the local first/second order
// statistics consumed by every estimator.
//
// All functions are pure. Sums run over points in the order the index set
// lists them and, for each point, over its neighbors in ascending index
// order, so results are bitwise reproducible for identical inputs.
//

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spssa/error.hpp"

namespace spssa {

using Index = Eigen::Index;
using Locations = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// n observations of a p-variate field at planar locations; row i of
/// `values` is observed at row i of `locations`.
struct SpatialDataset {
    Locations locations;
    Eigen::MatrixXd values;

    Index n() const { return values.rows(); }
    Index p() const { return values.cols(); }
};

/// Checks the dataset invariants and warns about duplicate locations.
inline void validate_dataset(const SpatialDataset& data) {
    if (data.locations.rows() != data.values.rows())
        throw DomainError("dataset has " + std::to_string(data.locations.rows()) + " locations but " +
                          std::to_string(data.values.rows()) + " value rows");
    if (data.n() < 2)
        throw DomainError("dataset needs at least 2 observations, got " + std::to_string(data.n()));
    if (data.p() < 1)
        throw DomainError("dataset needs at least one variable");
    if (!data.locations.allFinite() || !data.values.allFinite())
        throw DomainError("dataset contains non-finite entries");

    std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(data.n()));
    for (Index i = 0; i < data.n(); ++i)
        pts[static_cast<std::size_t>(i)] = {data.locations(i, 0), data.locations(i, 1)};
    std::sort(pts.begin(), pts.end());
    const auto dups = std::distance(std::unique(pts.begin(), pts.end()), pts.end());
    if (dups > 0)
        warn(std::to_string(dups) + " duplicate location(s); distinct observations at one site are treated as separate points");
}

inline SpatialDataset make_dataset(Locations locations, Eigen::MatrixXd values) {
    SpatialDataset data{std::move(locations), std::move(values)};
    validate_dataset(data);
    return data;
}

// ---------------------------------------------------------------------------
// Partitions

/// Disjoint, exhaustive assignment of n points to K nonempty subdomains.
/// Subdomain ids are 0-based internally.
class Partition {
public:
    Partition() = default;

    /// `assignment[i]` in [0, K); every id in [0, K) must occur.
    explicit Partition(std::vector<int> assignment) : assignment_(std::move(assignment)) {
        if (assignment_.empty())
            throw DomainError("partition needs at least one point");
        const int k = *std::max_element(assignment_.begin(), assignment_.end()) + 1;
        if (*std::min_element(assignment_.begin(), assignment_.end()) < 0)
            throw DomainError("partition ids must be nonnegative");
        members_.assign(static_cast<std::size_t>(k), {});
        for (std::size_t i = 0; i < assignment_.size(); ++i)
            members_[static_cast<std::size_t>(assignment_[i])].push_back(static_cast<Index>(i));
        for (int j = 0; j < k; ++j)
            if (members_[static_cast<std::size_t>(j)].empty())
                throw DomainError("partition subdomain " + std::to_string(j) + " is empty");
    }

    Index n() const { return static_cast<Index>(assignment_.size()); }
    int size() const { return static_cast<int>(members_.size()); }
    const std::vector<int>& assignment() const { return assignment_; }
    std::span<const Index> members(int k) const { return members_.at(static_cast<std::size_t>(k)); }
    Index subdomain_size(int k) const { return static_cast<Index>(members_.at(static_cast<std::size_t>(k)).size()); }

    std::vector<Index> sizes() const {
        std::vector<Index> s;
        for (const auto& m : members_)
            s.push_back(static_cast<Index>(m.size()));
        return s;
    }

    bool operator==(const Partition& other) const { return assignment_ == other.assignment_; }

private:
    std::vector<int> assignment_;
    std::vector<std::vector<Index>> members_;
};

/// True when both partitions group the points identically, whatever the ids.
inline bool same_subdomains(const Partition& a, const Partition& b) {
    if (a.n() != b.n() || a.size() != b.size())
        return false;
    std::vector<int> map_ab(static_cast<std::size_t>(a.size()), -1);
    for (Index i = 0; i < a.n(); ++i) {
        const auto ka = static_cast<std::size_t>(a.assignment()[static_cast<std::size_t>(i)]);
        const int kb = b.assignment()[static_cast<std::size_t>(i)];
        if (map_ab[ka] == -1)
            map_ab[ka] = kb;
        else if (map_ab[ka] != kb)
            return false;
    }
    return true;
}

struct Rect {
    double xmin, xmax, ymin, ymax;
};

inline Rect bounding_box(const Locations& loc) {
    return {loc.col(0).minCoeff(), loc.col(0).maxCoeff(), loc.col(1).minCoeff(), loc.col(1).maxCoeff()};
}

/// Cell of `v` among `cells` equal-width cells on [lo, hi]; half-open except
/// the last cell, which also takes the upper edge.
inline int grid_cell(double v, double lo, double hi, int cells) {
    const int c = static_cast<int>(std::floor((v - lo) / (hi - lo) * cells));
    return std::clamp(c, 0, cells - 1);
}

/// Raw cell index (row-major, row counted along y from ymin) of every point.
inline std::vector<int> grid_cells(const Locations& loc, int k_rows, int k_cols, const Rect& b) {
    std::vector<int> cells(static_cast<std::size_t>(loc.rows()));
    for (Index i = 0; i < loc.rows(); ++i) {
        const double x = loc(i, 0), y = loc(i, 1);
        if (x < b.xmin || x > b.xmax || y < b.ymin || y > b.ymax)
            throw DomainError("location " + std::to_string(i) + " lies outside the grid bounds");
        cells[static_cast<std::size_t>(i)] =
            grid_cell(y, b.ymin, b.ymax, k_rows) * k_cols + grid_cell(x, b.xmin, b.xmax, k_cols);
    }
    return cells;
}

/// Equal-width k_rows x k_cols grid over `bounds` (default: bounding box).
/// Empty cells are dropped with a warning; subdomain ids follow cell order.
inline Partition build_grid_partition(const Locations& loc, int k_rows, int k_cols,
                                      std::optional<Rect> bounds = std::nullopt) {
    if (k_rows < 1 || k_cols < 1)
        throw ConfigError("partition", "grid dimensions must be positive");
    if (loc.rows() < 1)
        throw DomainError("grid partition needs at least one location");
    const Rect b = bounds.value_or(bounding_box(loc));
    if (!(b.xmax > b.xmin) || !(b.ymax > b.ymin))
        throw DomainError("grid bounds have zero width or height");

    const auto cells = grid_cells(loc, k_rows, k_cols, b);
    std::vector<int> remap(static_cast<std::size_t>(k_rows * k_cols), -1);
    for (int c : cells)
        remap[static_cast<std::size_t>(c)] = 0;
    int next = 0;
    for (auto& r : remap)
        if (r == 0)
            r = next++;
    if (next < k_rows * k_cols)
        warn("grid " + std::to_string(k_rows) + "x" + std::to_string(k_cols) + " has " +
             std::to_string(k_rows * k_cols - next) + " empty cell(s); using " + std::to_string(next) +
             " subdomains");

    std::vector<int> assignment(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        assignment[i] = remap[static_cast<std::size_t>(cells[i])];
    return Partition(std::move(assignment));
}

inline Partition build_grid_partition(const SpatialDataset& data, int k_rows, int k_cols,
                                      std::optional<Rect> bounds = std::nullopt) {
    return build_grid_partition(data.locations, k_rows, k_cols, bounds);
}

/// Subdomains by distinct label, numbered in order of first appearance.
template <class Label>
Partition build_label_partition(const std::vector<Label>& labels) {
    if (labels.empty())
        throw DomainError("label partition needs at least one label");
    std::map<Label, int> ids;
    std::vector<int> assignment;
    assignment.reserve(labels.size());
    for (const auto& l : labels) {
        auto [it, inserted] = ids.try_emplace(l, static_cast<int>(ids.size()));
        assignment.push_back(it->second);
    }
    return Partition(std::move(assignment));
}

// ---------------------------------------------------------------------------
// Kernels

/// 95% quantile of the standard normal distribution.
inline constexpr double kNormalQuantile95 = 1.6448536269514722;

/// Isotropic spatial kernel f(h), evaluated through ||h|| only.
struct KernelSpec {
    enum class Kind { ball, ring, gaussian };

    Kind kind = Kind::ball;
    double r = 0.0;   // ball, gaussian
    double r1 = 0.0;  // ring inner radius (exclusive)
    double r2 = 0.0;  // ring outer radius (inclusive)

    static KernelSpec ball(double radius) { return checked({Kind::ball, radius, 0.0, 0.0}); }
    static KernelSpec ring(double inner, double outer) { return checked({Kind::ring, 0.0, inner, outer}); }
    static KernelSpec gaussian(double radius) { return checked({Kind::gaussian, radius, 0.0, 0.0}); }

    void validate() const {
        switch (kind) {
        case Kind::ball:
            if (!(r >= 0.0) || !std::isfinite(r))
                throw ConfigError("kernel", "ball kernel needs a finite radius r >= 0");
            break;
        case Kind::ring:
            if (!(r1 >= 0.0) || !(r2 > r1) || !std::isfinite(r2))
                throw ConfigError("kernel", "ring kernel needs 0 <= r1 < r2");
            break;
        case Kind::gaussian:
            if (!(r > 0.0) || !std::isfinite(r))
                throw ConfigError("kernel", "gaussian kernel needs r > 0");
            break;
        }
    }

    double operator()(double dist) const {
        switch (kind) {
        case Kind::ball:
            return dist <= r ? 1.0 : 0.0;
        case Kind::ring:
            return (r1 < dist && dist <= r2) ? 1.0 : 0.0;
        case Kind::gaussian: {
            const double z = kNormalQuantile95 * dist / r;
            return std::exp(-0.5 * z * z);
        }
        }
        return 0.0;
    }

    /// Distance beyond which the weight is exactly zero in double precision.
    double support() const {
        switch (kind) {
        case Kind::ball:
            return r;
        case Kind::ring:
            return r2;
        case Kind::gaussian:
            // exp(-0.5 z^2) underflows to +0 for z > ~38.6
            return 40.0 * r / kNormalQuantile95;
        }
        return 0.0;
    }

    std::string to_string() const {
        std::ostringstream os;
        switch (kind) {
        case Kind::ball: os << "ball:" << r; break;
        case Kind::ring: os << "ring:" << r1 << "," << r2; break;
        case Kind::gaussian: os << "gauss:" << r; break;
        }
        return os.str();
    }

    bool operator==(const KernelSpec&) const = default;

private:
    static KernelSpec checked(KernelSpec k) {
        k.validate();
        return k;
    }
};

/// Parses `ball:R`, `ring:R1,R2` or `gauss:R` (also `gaussian:R`).
inline KernelSpec parse_kernel(const std::string& text) {
    const auto colon = text.find(':');
    const auto bad = [&](const std::string& why) {
        return ConfigError("kernel", "malformed kernel '" + text + "': " + why);
    };
    if (colon == std::string::npos)
        throw bad("expected kind:params");
    const std::string kind = text.substr(0, colon);
    std::vector<double> params;
    std::string rest = text.substr(colon + 1);
    std::size_t start = 0;
    while (true) {
        const auto comma = rest.find(',', start);
        const std::string tok = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        double v = 0.0;
        const auto* first = tok.data();
        const auto* last = tok.data() + tok.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (tok.empty() || ec != std::errc() || ptr != last)
            throw bad("'" + tok + "' is not a number");
        params.push_back(v);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (kind == "ball" || kind == "gauss" || kind == "gaussian") {
        if (params.size() != 1)
            throw bad(kind + " takes one radius");
        return kind == "ball" ? KernelSpec::ball(params[0]) : KernelSpec::gaussian(params[0]);
    }
    if (kind == "ring") {
        if (params.size() != 2)
            throw bad("ring takes two radii");
        return KernelSpec::ring(params[0], params[1]);
    }
    throw bad("unknown kind '" + kind + "'");
}

inline double kernel_eval(const KernelSpec& spec, const Eigen::Vector2d& h) {
    spec.validate();
    return spec(h.norm());
}

/// Sparse pairwise kernel weights in CSR form: for point i the neighbors
/// `neighbors[offsets[i] .. offsets[i+1])` (ascending, excluding i itself)
/// carry the nonzero weights f(u_i - u_j).
struct NeighborGraph {
    std::vector<Index> offsets;
    std::vector<Index> neighbors;
    std::vector<double> weights;

    Index n() const { return static_cast<Index>(offsets.size()) - 1; }
    Index degree(Index i) const {
        return offsets[static_cast<std::size_t>(i) + 1] - offsets[static_cast<std::size_t>(i)];
    }
};

inline NeighborGraph build_neighbor_graph(const Locations& loc, const KernelSpec& kernel) {
    kernel.validate();
    const Index n = loc.rows();
    NeighborGraph g;
    g.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    if (n == 0)
        return g;

    const Rect b = bounding_box(loc);
    const double extent = std::max({b.xmax - b.xmin, b.ymax - b.ymin, 1e-300});
    const double side = std::max(1.0, std::floor(std::sqrt(static_cast<double>(n))));
    const double cell = std::max({kernel.support(), extent / side, 1e-300});
    const auto nx = static_cast<Index>(std::floor((b.xmax - b.xmin) / cell)) + 1;
    const auto ny = static_cast<Index>(std::floor((b.ymax - b.ymin) / cell)) + 1;

    auto cell_of = [&](Index i) -> std::pair<Index, Index> {
        const auto cx = std::min(nx - 1, static_cast<Index>(std::floor((loc(i, 0) - b.xmin) / cell)));
        const auto cy = std::min(ny - 1, static_cast<Index>(std::floor((loc(i, 1) - b.ymin) / cell)));
        return {cx, cy};
    };

    // bucket points by cell (counting sort keeps ascending index order per bucket)
    std::vector<Index> start(static_cast<std::size_t>(nx * ny) + 1, 0);
    std::vector<Index> cell_id(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        auto [cx, cy] = cell_of(i);
        cell_id[static_cast<std::size_t>(i)] = cy * nx + cx;
        ++start[static_cast<std::size_t>(cy * nx + cx) + 1];
    }
    for (std::size_t c = 1; c < start.size(); ++c)
        start[c] += start[c - 1];
    std::vector<Index> bucket(static_cast<std::size_t>(n));
    {
        auto fill = start;
        for (Index i = 0; i < n; ++i)
            bucket[static_cast<std::size_t>(fill[static_cast<std::size_t>(cell_id[static_cast<std::size_t>(i)])]++)] = i;
    }

    std::vector<std::pair<Index, double>> row;
    for (Index i = 0; i < n; ++i) {
        row.clear();
        auto [cx, cy] = cell_of(i);
        for (Index yy = std::max<Index>(0, cy - 1); yy <= std::min(ny - 1, cy + 1); ++yy) {
            for (Index xx = std::max<Index>(0, cx - 1); xx <= std::min(nx - 1, cx + 1); ++xx) {
                const auto c = static_cast<std::size_t>(yy * nx + xx);
                for (Index t = start[c]; t < start[c + 1]; ++t) {
                    const Index j = bucket[static_cast<std::size_t>(t)];
                    if (j == i)
                        continue;
                    const double w = kernel((loc.row(i) - loc.row(j)).norm());
                    if (w != 0.0)
                        row.emplace_back(j, w);
                }
            }
        }
        std::sort(row.begin(), row.end());
        for (const auto& [j, w] : row) {
            g.neighbors.push_back(j);
            g.weights.push_back(w);
        }
        g.offsets[static_cast<std::size_t>(i) + 1] = static_cast<Index>(g.neighbors.size());
    }
    return g;
}

// ---------------------------------------------------------------------------
// Local statistics (1/|U_k| divisors throughout)

inline Eigen::VectorXd local_mean(const SpatialDataset& data, std::span<const Index> idx) {
    if (idx.empty())
        throw DomainError("local mean over an empty index set");
    Eigen::VectorXd m = Eigen::VectorXd::Zero(data.p());
    for (Index i : idx)
        m += data.values.row(i).transpose();
    return m / static_cast<double>(idx.size());
}

inline Eigen::MatrixXd local_cov(const SpatialDataset& data, std::span<const Index> idx) {
    if (idx.size() < 2)
        throw DomainError("local covariance needs at least 2 points, got " + std::to_string(idx.size()));
    const Eigen::VectorXd m = local_mean(data, idx);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(data.p(), data.p());
    for (Index i : idx) {
        const Eigen::VectorXd d = data.values.row(i).transpose() - m;
        c.noalias() += d * d.transpose();
    }
    c /= static_cast<double>(idx.size());
    return 0.5 * (c + c.transpose());
}

inline std::vector<Index> all_indices(Index n) {
    std::vector<Index> idx(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        idx[static_cast<std::size_t>(i)] = i;
    return idx;
}

/// Local spatial covariance with an arbitrary pairwise weight w(i, j) over
/// dataset indices:  (1/|U|) sum_{i != j in U} w(i,j) (x_i - m)(x_j - m)^T,
/// symmetrized. The scaled estimator is this accumulation with
/// w(i,j) = f(u_i - u_j) / F_U(u_i; f).
template <class WeightFn>
Eigen::MatrixXd local_spatial_cov_weighted(const SpatialDataset& data, std::span<const Index> idx, WeightFn&& weight) {
    if (idx.size() < 2)
        throw DomainError("local spatial covariance needs at least 2 points, got " + std::to_string(idx.size()));
    const Eigen::VectorXd m = local_mean(data, idx);
    const Index p = data.p();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd y(p);
    for (Index i : idx) {
        y.setZero();
        for (Index j : idx) {
            if (j == i)
                continue;
            const double w = weight(i, j);
            if (w != 0.0)
                y += w * (data.values.row(j).transpose() - m);
        }
        acc.noalias() += (data.values.row(i).transpose() - m) * y.transpose();
    }
    acc /= static_cast<double>(idx.size());
    return 0.5 * (acc + acc.transpose());
}

namespace detail {

/// Graph-backed local spatial covariance of the points `members`. When
/// `assignment` is given, only neighbors j with assignment[j] == k enter
/// (the sum stays inside the subdomain). Points without any kernel
/// neighbor contribute zero to the scaled estimator.
inline Eigen::MatrixXd lcov_from_graph(const Eigen::MatrixXd& values, std::span<const Index> members,
                                       const NeighborGraph& graph, const std::vector<int>* assignment, int k,
                                       bool scaled) {
    if (members.size() < 2)
        throw DomainError("local spatial covariance needs at least 2 points, got " + std::to_string(members.size()));
    const Index p = values.cols();
    Eigen::RowVectorXd m = Eigen::RowVectorXd::Zero(p);
    for (Index i : members)
        m += values.row(i);
    m /= static_cast<double>(members.size());

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
    Eigen::RowVectorXd y(p);
    for (Index i : members) {
        y.setZero();
        double total = 0.0;
        const auto begin = static_cast<std::size_t>(graph.offsets[static_cast<std::size_t>(i)]);
        const auto end = static_cast<std::size_t>(graph.offsets[static_cast<std::size_t>(i) + 1]);
        for (std::size_t t = begin; t < end; ++t) {
            const Index j = graph.neighbors[t];
            if (assignment && (*assignment)[static_cast<std::size_t>(j)] != k)
                continue;
            const double w = graph.weights[t];
            y += w * (values.row(j) - m);
            total += w;
        }
        if (total == 0.0)
            continue;
        if (scaled)
            y /= total;
        acc.noalias() += (values.row(i) - m).transpose() * y;
    }
    acc /= static_cast<double>(members.size());
    return 0.5 * (acc + acc.transpose());
}

}  // namespace detail

inline Eigen::MatrixXd local_spatial_cov(const SpatialDataset& data, std::span<const Index> idx,
                                         const KernelSpec& kernel, bool scaled) {
    kernel.validate();
    if (idx.size() < 2)
        throw DomainError("local spatial covariance needs at least 2 points, got " + std::to_string(idx.size()));
    SpatialDataset sub;
    sub.locations.resize(static_cast<Index>(idx.size()), 2);
    sub.values.resize(static_cast<Index>(idx.size()), data.p());
    for (std::size_t t = 0; t < idx.size(); ++t) {
        sub.locations.row(static_cast<Index>(t)) = data.locations.row(idx[t]);
        sub.values.row(static_cast<Index>(t)) = data.values.row(idx[t]);
    }
    const auto graph = build_neighbor_graph(sub.locations, kernel);
    const auto local = all_indices(sub.n());
    return detail::lcov_from_graph(sub.values, local, graph, nullptr, 0, scaled);
}

// ---------------------------------------------------------------------------
// Whitening

/// Sample covariance with the 1/n divisor.
inline Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& values) {
    const Eigen::RowVectorXd m = values.colwise().mean();
    const Eigen::MatrixXd c = values.rowwise() - m;
    Eigen::MatrixXd cov = (c.transpose() * c) / static_cast<double>(values.rows());
    return 0.5 * (cov + cov.transpose());
}

/// Relative eigenvalue floor below which a covariance counts as singular.
inline constexpr double kSingularityFloor = 1e-12;

struct WhiteningResult {
    Eigen::VectorXd center;
    Eigen::MatrixXd whitener;    // Cov^{-1/2}, symmetric positive definite
    Eigen::MatrixXd dewhitener;  // Cov^{1/2}
    SpatialDataset whitened;
};

/// Works from a thin SVD of the centered values rather than the covariance,
/// so the whitened covariance is accurate to about eps * cond instead of
/// eps * cond^2.
inline WhiteningResult whiten(const SpatialDataset& data) {
    if (data.n() < 2)
        throw DomainError("whitening needs at least 2 observations");
    WhiteningResult w;
    w.center = data.values.colwise().mean().transpose();
    const Eigen::MatrixXd centered = data.values.rowwise() - w.center.transpose();
    const Eigen::JacobiSVD<Eigen::MatrixXd, Eigen::ColPivHouseholderQRPreconditioner> svd(centered,
                                                                                          Eigen::ComputeThinV);
    // covariance eigenvalues, descending
    const Eigen::VectorXd d = svd.singularValues().array().square() / static_cast<double>(data.n());
    const double largest = d.size() ? d(0) : 0.0;
    const double smallest = d.size() == data.p() ? d(d.size() - 1) : 0.0;
    const double floor = kSingularityFloor * std::max(largest, 0.0);
    if (!(largest > 0.0) || !(smallest > floor)) {
        std::ostringstream os;
        os << "covariance is singular: eigenvalue " << smallest << " <= floor " << floor;
        throw SingularityError(smallest, os.str());
    }
    const Eigen::MatrixXd& v = svd.matrixV();
    const Eigen::MatrixXd inv_sqrt = v * d.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
    const Eigen::MatrixXd sqrt = v * d.cwiseSqrt().asDiagonal() * v.transpose();
    w.whitener = 0.5 * (inv_sqrt + inv_sqrt.transpose());
    w.dewhitener = 0.5 * (sqrt + sqrt.transpose());
    w.whitened.locations = data.locations;
    w.whitened.values = centered * w.whitener;
    return w;
}

}  // namespace spssa
