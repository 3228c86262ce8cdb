#pragma once
//
// Gaussian random fields with Matern covariance and the four simulation
// settings (nonstationary mean, variance, spatial dependence, and all three).
//
// Random streams of one draw (child tags of the trial generator):
//   1  locations
//   2  Gaussian innovations of the Matern(0.5, 1) fields, 8 columns:
//      5 stationary components, then the base fields y_1, y_2, y_3
//   3  block-wise fields of the dependence-nonstationary signals
//   4  mixing matrix
// Every setting draws all streams the same way, so with one seed setting 4
// reproduces n_1 of setting 1, n_2 of setting 2 and n_3 of setting 3.
//

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spssa/error.hpp"
#include "spssa/fit.hpp"
#include "spssa/rng.hpp"
#include "spssa/spatial_core.hpp"

namespace spssa {

struct MaternParams {
    double nu = 0.5;   // smoothness
    double phi = 1.0;  // range

    void validate() const {
        if (!(nu > 0.0) || !(phi > 0.0) || !std::isfinite(nu) || !std::isfinite(phi))
            throw ConfigError("matern", "Matern parameters need nu > 0 and phi > 0");
    }
};

/// Matern correlation  x^nu K_nu(x) / (2^{nu-1} Gamma(nu)),  x = h / phi,
/// normalized so that C(0) = 1. Half-integer smoothness 1/2, 3/2, 5/2 uses
/// the closed forms.
inline double matern_cov(double h, const MaternParams& params) {
    params.validate();
    if (!(h >= 0.0))
        throw DomainError("Matern covariance needs a nonnegative distance");
    if (h == 0.0)
        return 1.0;
    const double x = h / params.phi;
    if (params.nu == 0.5)
        return std::exp(-x);
    if (params.nu == 1.5)
        return (1.0 + x) * std::exp(-x);
    if (params.nu == 2.5)
        return (1.0 + x + x * x / 3.0) * std::exp(-x);
    if (x > 700.0)
        return 0.0;
    const double c = std::exp(params.nu * std::log(x) - (params.nu - 1.0) * std::log(2.0) - std::lgamma(params.nu)) *
                     std::cyl_bessel_k(params.nu, x);
    return std::min(c, 1.0);
}

inline Eigen::MatrixXd matern_matrix(const Locations& loc, const MaternParams& params) {
    params.validate();
    const Index n = loc.rows();
    Eigen::MatrixXd c(n, n);
    for (Index j = 0; j < n; ++j) {
        c(j, j) = 1.0;
        for (Index i = j + 1; i < n; ++i) {
            const double v = matern_cov((loc.row(i) - loc.row(j)).norm(), params);
            c(i, j) = v;
            c(j, i) = v;
        }
    }
    return c;
}

/// n i.i.d. uniform locations on [0, side]^2.
inline Locations sample_uniform_locations(double side, Index n, Rng& rng) {
    if (!(side > 0.0))
        throw ConfigError("side_length", "side length must be positive");
    if (n < 1)
        throw ConfigError("n", "need at least one location");
    Locations loc(n, 2);
    for (Index i = 0; i < n; ++i) {
        loc(i, 0) = rng.uniform(0.0, side);
        loc(i, 1) = rng.uniform(0.0, side);
    }
    return loc;
}

/// Lower Cholesky factor of a covariance matrix. Diagonal jitter starts at
/// 1e-10 * trace / n and grows tenfold up to 1e-4 * trace / n.
inline Eigen::MatrixXd jittered_cholesky(Eigen::MatrixXd cov) {
    const Index n = cov.rows();
    const double mean_diag = cov.trace() / static_cast<double>(n);
    double applied = 0.0;
    for (double rel = 1e-10; rel <= 1e-4 * 1.0000001; rel *= 10.0) {
        const double jitter = rel * mean_diag;
        cov.diagonal().array() += jitter - applied;
        applied = jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() == Eigen::Success)
            return llt.matrixL();
    }
    std::ostringstream os;
    os << "Cholesky factorization failed with jitter up to " << applied << " (1e-4 * trace / n)";
    throw NumericalError(os.str());
}

/// `innovations` (n x k standard normals) mapped to k independent Matern
/// fields on `loc`.
inline Eigen::MatrixXd matern_fields(const Locations& loc, const MaternParams& params,
                                     const Eigen::MatrixXd& innovations) {
    if (innovations.rows() != loc.rows())
        throw DomainError("innovation rows must match the number of locations");
    const Eigen::MatrixXd l = jittered_cholesky(matern_matrix(loc, params));
    return l.triangularView<Eigen::Lower>() * innovations;
}

/// k independent zero-mean Matern fields sharing one factorization.
inline Eigen::MatrixXd sample_grf_columns(const Locations& loc, const MaternParams& params, Index k, Rng& rng) {
    return matern_fields(loc, params, rng.normal_matrix(loc.rows(), k));
}

inline Eigen::VectorXd sample_grf(const Locations& loc, const MaternParams& params, Rng& rng) {
    return sample_grf_columns(loc, params, 1, rng).col(0);
}

// ---------------------------------------------------------------------------
// Settings

inline constexpr int kSimP = 8;
inline constexpr int kSimQ = 3;
inline const MaternParams kStationaryMatern{0.5, 1.0};

/// Parameter partition of nonstationary signal `signal` (1..3): a
/// (signal+1) x (signal+1) grid over the domain whose cells carry labels
/// 1..2(signal+1), rows counted from the bottom, labels repeating every two
/// rows.
inline int parameter_label(int signal, int row, int col) {
    const int k = signal + 1;
    return (row % 2) * k + col + 1;
}

namespace detail {

// indexed by label - 1
inline const std::array<std::vector<double>, 3> kBlockMeans{{
    {1.5, -1.5, -1.5, 1.5},
    {1.0, -0.5, 2.0, 2.0, 1.0, -0.5},
    {-1.5, -0.5, 0.5, 1.5, 1.5, -1.5, -0.5, 0.5},
}};

inline const std::array<std::vector<double>, 3> kBlockVariances{{
    {0.4, 1.4, 1.4, 0.4},
    {3.0, 0.5, 1.5, 1.5, 3.0, 0.5},
    {0.4, 0.8, 1.5, 1.2, 1.2, 0.4, 0.8, 1.5},
}};

inline const std::array<std::vector<MaternParams>, 3> kBlockMatern{{
    {{0.3, 0.5}, {1.5, 1.3}, {1.0, 2.0}, {0.5, 2.0}},
    {{1.0, 1.5}, {0.5, 0.8}, {2.0, 1.7}, {0.5, 2.0}, {1.0, 2.0}, {0.5, 2.0}},
    {{1.6, 1.6}, {0.3, 0.3}, {2.5, 3.0}, {0.8, 3.0}, {0.5, 1.8}, {1.0, 3.0}, {0.5, 1.2}, {0.3, 2.5}},
}};

}  // namespace detail

inline double block_mean(int signal, int label) { return detail::kBlockMeans.at(signal - 1).at(label - 1); }
inline double block_variance(int signal, int label) { return detail::kBlockVariances.at(signal - 1).at(label - 1); }
inline MaternParams block_matern(int signal, int label) { return detail::kBlockMatern.at(signal - 1).at(label - 1); }

struct SettingConfig {
    int setting = 4;
    int side_length = 20;

    Index n() const { return static_cast<Index>(side_length) * side_length; }

    void validate() const {
        if (setting < 1 || setting > 4)
            throw ConfigError("setting", "unsupported setting " + std::to_string(setting) + " (expected 1..4)");
        if (side_length < 2)
            throw ConfigError("side_length", "side length must be at least 2");
    }
};

struct GroundTruth {
    Eigen::MatrixXd mixing;  // p x p orthogonal A, x = A z
    Eigen::MatrixXd latent;  // n x p, columns [s_1..s_5, n_1..n_3]
    Eigen::MatrixXd w_s;     // true unmixing rows of the stationary block
    Eigen::MatrixXd w_n;
    Eigen::MatrixXd p_s;
    Eigen::MatrixXd p_n;
};

struct SimulatedData {
    SpatialDataset data;
    GroundTruth truth;
};

/// Grid cell (row, col) of each location in a k x k grid over [0, side]^2.
inline std::vector<std::pair<int, int>> grid_rows_cols(const Locations& loc, double side, int k) {
    std::vector<std::pair<int, int>> rc(static_cast<std::size_t>(loc.rows()));
    for (Index i = 0; i < loc.rows(); ++i)
        rc[static_cast<std::size_t>(i)] = {grid_cell(loc(i, 1), 0.0, side, k), grid_cell(loc(i, 0), 0.0, side, k)};
    return rc;
}

/// Signal `signal` of the dependence setting: independent Matern fields on
/// each cell of its parameter partition, with that cell's label parameters.
inline Eigen::VectorXd blockwise_matern_signal(const Locations& loc, double side, int signal, const Rng& rng) {
    const int k = signal + 1;
    const auto rc = grid_rows_cols(loc, side, k);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(loc.rows());
    for (int row = 0; row < k; ++row) {
        for (int col = 0; col < k; ++col) {
            std::vector<Index> members;
            for (Index i = 0; i < loc.rows(); ++i)
                if (rc[static_cast<std::size_t>(i)] == std::pair{row, col})
                    members.push_back(i);
            if (members.empty())
                continue;
            Locations sub(static_cast<Index>(members.size()), 2);
            for (std::size_t t = 0; t < members.size(); ++t)
                sub.row(static_cast<Index>(t)) = loc.row(members[t]);
            Rng cell_rng = rng.child(static_cast<std::uint64_t>(row * k + col));
            const Eigen::VectorXd field =
                sample_grf(sub, block_matern(signal, parameter_label(signal, row, col)), cell_rng);
            for (std::size_t t = 0; t < members.size(); ++t)
                out(members[t]) = field(static_cast<Index>(t));
        }
    }
    return out;
}

/// Nonstationary signal of the given kind (1 mean, 2 variance, 3 dependence).
inline Eigen::VectorXd nonstationary_signal(int kind, int signal, const Locations& loc, double side,
                                            const Eigen::VectorXd& base, const Rng& block_rng) {
    if (kind == 3)
        return blockwise_matern_signal(loc, side, signal, block_rng.child(static_cast<std::uint64_t>(signal)));
    const int k = signal + 1;
    const auto rc = grid_rows_cols(loc, side, k);
    Eigen::VectorXd out(loc.rows());
    for (Index i = 0; i < loc.rows(); ++i) {
        const auto [row, col] = rc[static_cast<std::size_t>(i)];
        const int label = parameter_label(signal, row, col);
        out(i) = kind == 1 ? base(i) + block_mean(signal, label) : std::sqrt(block_variance(signal, label)) * base(i);
    }
    return out;
}

inline GroundTruth make_truth(Eigen::MatrixXd mixing, Eigen::MatrixXd latent, int q) {
    GroundTruth t;
    const Index p = mixing.rows();
    const Eigen::MatrixXd unmixing = mixing.transpose();
    t.w_s = unmixing.topRows(p - q);
    t.w_n = unmixing.bottomRows(q);
    t.p_s = projector_of(t.w_s);
    t.p_n = projector_of(t.w_n);
    t.mixing = std::move(mixing);
    t.latent = std::move(latent);
    return t;
}

inline SimulatedData generate_setting(const SettingConfig& cfg, const Rng& rng) {
    cfg.validate();
    const double side = cfg.side_length;
    Rng loc_rng = rng.child(1);
    Rng base_rng = rng.child(2);
    const Rng block_rng = rng.child(3);
    Rng mix_rng = rng.child(4);

    const Locations loc = sample_uniform_locations(side, cfg.n(), loc_rng);
    const Eigen::MatrixXd base = sample_grf_columns(loc, kStationaryMatern, kSimP, base_rng);

    Eigen::MatrixXd latent(cfg.n(), kSimP);
    latent.leftCols(kSimP - kSimQ) = base.leftCols(kSimP - kSimQ);
    for (int signal = 1; signal <= kSimQ; ++signal) {
        const int kind = cfg.setting == 4 ? signal : cfg.setting;
        latent.col(kSimP - kSimQ + signal - 1) =
            nonstationary_signal(kind, signal, loc, side, base.col(kSimP - kSimQ + signal - 1), block_rng);
    }

    Eigen::MatrixXd mixing = random_orthogonal(kSimP, mix_rng);
    SimulatedData out;
    out.data.locations = loc;
    out.data.values = latent * mixing.transpose();
    out.truth = make_truth(std::move(mixing), std::move(latent), kSimQ);
    return out;
}

}  // namespace spssa
