#pragma once
//
// Augmentation (ladle) estimate of the nonstationary dimension q.
//
// Each repetition appends r white-noise channels to the whitened field,
// re-whitens the (p + r)-variate field jointly, and decomposes the method's
// scatter matrices. With v_i the i-th column of the (score-ordered)
// rotation and v_i^AUG its last r coordinates:
//
//   f(i)   = mean over repetitions of ||v_i^AUG||^2,   f(0) = 0
//   Phi(l) = d_{l+1} / sum_{i <= l+1} d_i,             d_{p+1} = 0
//   g(k)   = Phi(k) + sum_{i=1..k} f(i),               q_hat = argmin g
//
// where d is the repetition-averaged sequence of |eigenvalues| (or summed
// |pseudo-eigenvalues| for joint diagonalization).
//

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spssa/error.hpp"
#include "spssa/fit.hpp"
#include "spssa/rng.hpp"
#include "spssa/spatial_core.hpp"

namespace spssa {

struct LadleCurve {
    Eigen::VectorXd f;    // k = 0..p
    Eigen::VectorXd phi;  // k = 0..p
    Eigen::VectorXd g;    // k = 0..p
    Eigen::VectorXd eigenvalues;  // averaged |d_1| .. |d_p|
    int q_hat = 0;
    int r = 0;
    int s = 0;
};

/// Appends r columns of independent N(0, 1) noise.
inline SpatialDataset augment_dataset(const SpatialDataset& whitened, int r, Rng& rng) {
    if (r < 1)
        throw ConfigError("r", "augmentation dimension r must be >= 1");
    SpatialDataset out;
    out.locations = whitened.locations;
    out.values.resize(whitened.n(), whitened.p() + r);
    out.values.leftCols(whitened.p()) = whitened.values;
    out.values.rightCols(r) = rng.normal_matrix(whitened.n(), r);
    return out;
}

/// Phi(0..p) from a descending nonnegative sequence holding at least d_1..d_p.
inline Eigen::VectorXd normalized_scree(const Eigen::VectorXd& d, Index p) {
    if (d.size() < p)
        throw DomainError("scree needs at least p eigenvalues");
    Eigen::VectorXd phi(p + 1);
    double running = 0.0;
    for (Index l = 0; l <= p; ++l) {
        const double next = l < p ? d(l) : 0.0;
        running += next;
        phi(l) = next / std::max(running, 1e-300);
    }
    return phi;
}

/// argmin over g, ties resolved toward the smaller index.
inline int estimate_rank(const Eigen::VectorXd& g) {
    if (g.size() == 0)
        throw DomainError("empty ladle curve");
    Index best = 0;
    for (Index k = 1; k < g.size(); ++k)
        if (g(k) < g(best))
            best = k;
    return static_cast<int>(best);
}

inline int estimate_rank(const LadleCurve& curve) { return estimate_rank(curve.g); }

/// Ladle curve from per-repetition decompositions of the (p + r)-variate
/// augmented problem.
inline LadleCurve ladle_from_decompositions(std::span<const Decomposition> reps, Index p, int r) {
    if (reps.empty())
        throw ConfigError("s", "at least one repetition is required");
    const Index dim = p + r;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(p + 1);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(p);
    for (const auto& rep : reps) {
        if (rep.rotation.rows() != dim || rep.rotation.cols() != dim || rep.scores.size() != dim)
            throw DomainError("decomposition does not match dimension p + r = " + std::to_string(dim));
        for (Index i = 1; i <= p; ++i)
            f(i) += rep.rotation.col(i - 1).tail(r).squaredNorm();
        d += rep.scores.head(p).cwiseAbs();
    }
    const auto s = static_cast<double>(reps.size());
    f /= s;
    d /= s;

    LadleCurve curve;
    curve.f = f;
    curve.phi = normalized_scree(d, p);
    curve.g.resize(p + 1);
    double cumulative = 0.0;
    for (Index k = 0; k <= p; ++k) {
        cumulative += f(k);
        curve.g(k) = curve.phi(k) + cumulative;
    }
    curve.eigenvalues = d;
    curve.q_hat = estimate_rank(curve.g);
    curve.r = r;
    curve.s = static_cast<int>(reps.size());
    return curve;
}

/// Repetition j draws its noise from `rng.child(j)`, so the curve does not
/// depend on execution order.
inline LadleCurve ladle_curves(const SpatialDataset& data, const Partition& part, const MethodSpec& spec, int r,
                               int s, const Rng& rng) {
    spec.validate();
    if (r < 1)
        throw ConfigError("r", "augmentation dimension r must be >= 1");
    if (s < 1)
        throw ConfigError("s", "repetition count s must be >= 1");
    if (part.n() != data.n())
        throw DomainError("partition does not match the dataset");
    const auto base = whiten(data);
    const auto graphs = kernel_graphs(data.locations, spec);

    std::vector<Decomposition> reps;
    reps.reserve(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) {
        Rng rep_rng = rng.child(static_cast<std::uint64_t>(j));
        const auto augmented = whiten(augment_dataset(base.whitened, r, rep_rng));
        reps.push_back(decompose(build_scatter_matrices(augmented.whitened, part, spec, &graphs)));
    }
    return ladle_from_decompositions(reps, data.p(), r);
}

}  // namespace spssa
