#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spssa/error.hpp"

namespace spssa {

/// Flips each column so that its largest-magnitude entry (first one on ties)
/// is positive.
inline void apply_sign_convention(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index arg = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&arg);
        if (vectors(arg, j) < 0.0)
            vectors.col(j) *= -1.0;
    }
}

/// Permutation sorting `keys` descending; equal keys keep their order.
inline std::vector<Eigen::Index> descending_order(const Eigen::VectorXd& keys) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(keys.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return keys(a) > keys(b); });
    return order;
}

struct EigenSolution {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

/// Eigendecomposition of a symmetric matrix, values descending. Eigen's
/// solver returns ascending values; ties keep the reverse of that order.
inline EigenSolution sym_eig(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw DomainError("sym_eig needs a square matrix");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw DomainError("sym_eig input is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigendecomposition failed");
    EigenSolution out{es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
    apply_sign_convention(out.vectors);
    return out;
}

/// Orthogonal approximate joint diagonalizer of m symmetric matrices.
/// Columns of `rotation` are ordered by descending score.
struct JointDiagSolution {
    Eigen::MatrixXd rotation;
    Eigen::MatrixXd pseudo_eigenvalues;  // m x p, row i = diag(V^T M_i V)
    Eigen::VectorXd scores;              // score_j = sum_i |D(i, j)|
    bool converged = false;
    int sweeps = 0;
    std::vector<double> objective_history;  // sum_i ||diag(V^T M_i V)||^2, index 0 = start
};

inline double diagonal_objective(std::span<const Eigen::MatrixXd> mats, const Eigen::MatrixXd& v) {
    double total = 0.0;
    for (const auto& m : mats)
        total += (v.transpose() * m * v).diagonal().squaredNorm();
    return total;
}

inline double off_diagonal_mass(std::span<const Eigen::MatrixXd> mats, const Eigen::MatrixXd& v) {
    double total = 0.0;
    for (const auto& m : mats) {
        Eigen::MatrixXd r = v.transpose() * m * v;
        r.diagonal().setZero();
        total += r.squaredNorm();
    }
    return total;
}

/// Cyclic Jacobi (Givens) sweeps over all index pairs. For each pair the
/// rotation angle is the closed-form maximizer of the diagonal mass of that
/// pair summed over all matrices. Iteration stops once no rotation in a full
/// sweep exceeds `tol` in angle, or after `max_sweeps` sweeps (then
/// `converged` is false).
inline JointDiagSolution joint_diagonalize(std::span<const Eigen::MatrixXd> mats, double tol = 1e-10,
                                           int max_sweeps = 100) {
    if (mats.empty())
        throw DomainError("joint diagonalization needs at least one matrix");
    const Eigen::Index p = mats.front().rows();
    double total_sq = 0.0;
    for (const auto& m : mats) {
        if (m.rows() != p || m.cols() != p)
            throw DomainError("joint diagonalization inputs must share one square shape");
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
            throw DomainError("joint diagonalization input is not symmetric");
        total_sq += m.squaredNorm();
    }

    std::vector<Eigen::MatrixXd> a;
    a.reserve(mats.size());
    for (const auto& m : mats)
        a.push_back(0.5 * (m + m.transpose()));
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(p, p);

    JointDiagSolution out;
    out.objective_history.push_back(diagonal_objective(a, Eigen::MatrixXd::Identity(p, p)));
    // rotations driven by rounding noise alone are skipped
    const double degenerate = 1e-28 * std::max(total_sq, 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double largest_angle = 0.0;
        for (Eigen::Index i = 0; i + 1 < p; ++i) {
            for (Eigen::Index j = i + 1; j < p; ++j) {
                double g11 = 0.0, g12 = 0.0, g22 = 0.0;
                for (const auto& m : a) {
                    const double h1 = m(i, i) - m(j, j);
                    const double h2 = m(i, j) + m(j, i);
                    g11 += h1 * h1;
                    g12 += h1 * h2;
                    g22 += h2 * h2;
                }
                const double ton = g11 - g22;
                const double toff = 2.0 * g12;
                const double radius = std::hypot(ton, toff);
                if (radius <= degenerate)
                    continue;
                const double theta = 0.5 * std::atan2(toff, ton + radius);
                largest_angle = std::max(largest_angle, std::abs(theta));
                if (std::abs(theta) <= tol)
                    continue;
                const double c = std::cos(theta), s = std::sin(theta);
                for (auto& m : a) {
                    const Eigen::VectorXd ci = m.col(i), cj = m.col(j);
                    m.col(i) = c * ci + s * cj;
                    m.col(j) = c * cj - s * ci;
                    const Eigen::RowVectorXd ri = m.row(i), rj = m.row(j);
                    m.row(i) = c * ri + s * rj;
                    m.row(j) = c * rj - s * ri;
                }
                const Eigen::VectorXd vi = v.col(i), vj = v.col(j);
                v.col(i) = c * vi + s * vj;
                v.col(j) = c * vj - s * vi;
            }
        }
        out.sweeps = sweep + 1;
        out.objective_history.push_back(diagonal_objective(mats, v));
        if (largest_angle < tol) {
            out.converged = true;
            break;
        }
    }

    apply_sign_convention(v);
    const auto m_count = static_cast<Eigen::Index>(mats.size());
    Eigen::MatrixXd d(m_count, p);
    for (Eigen::Index r = 0; r < m_count; ++r)
        d.row(r) = (v.transpose() * mats[static_cast<std::size_t>(r)] * v).diagonal().transpose();
    const Eigen::VectorXd raw_scores = d.cwiseAbs().colwise().sum().transpose();
    const auto order = descending_order(raw_scores);

    out.rotation.resize(p, p);
    out.pseudo_eigenvalues.resize(m_count, p);
    out.scores.resize(p);
    for (Eigen::Index c = 0; c < p; ++c) {
        const Eigen::Index src = order[static_cast<std::size_t>(c)];
        out.rotation.col(c) = v.col(src);
        out.pseudo_eigenvalues.col(c) = d.col(src);
        out.scores(c) = raw_scores(src);
    }
    return out;
}

inline JointDiagSolution joint_diagonalize(const std::vector<Eigen::MatrixXd>& mats, double tol = 1e-10,
                                           int max_sweeps = 100) {
    return joint_diagonalize(std::span<const Eigen::MatrixXd>(mats), tol, max_sweeps);
}

}  // namespace spssa
