#pragma once
//
// The four estimators (sir, save, cor, comb), the stationary/nonstationary
// split for a given q, and the projector-distance performance metric.
//

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spssa/diagonalize.hpp"
#include "spssa/error.hpp"
#include "spssa/rng.hpp"
#include "spssa/scatter.hpp"
#include "spssa/spatial_core.hpp"

namespace spssa {

enum class Method { sir, save, cor, comb };

inline std::string to_string(Method m) {
    switch (m) {
    case Method::sir: return "sir";
    case Method::save: return "save";
    case Method::cor: return "cor";
    case Method::comb: return "comb";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "sir") return Method::sir;
    if (s == "save") return Method::save;
    if (s == "cor") return Method::cor;
    if (s == "comb") return Method::comb;
    throw ConfigError("method", "unknown method '" + s + "' (expected sir, save, cor or comb)");
}

struct MethodSpec {
    Method method = Method::comb;
    std::vector<KernelSpec> kernels;
    bool scaled = true;

    void validate() const {
        if ((method == Method::cor || method == Method::comb) && kernels.empty())
            throw ConfigError("kernel", "method " + to_string(method) + " needs at least one kernel");
        for (const auto& k : kernels)
            k.validate();
    }
};

/// Scatter matrices used by `spec`, in the fixed order
/// M_mean, M_var, then one M_cor per kernel (comb); sir, save and cor use
/// their own matrices only.
///
/// `graphs`, when given, holds one neighbor graph per kernel for
/// `whitened.locations`, so repeated calls on one location set skip the
/// neighbor search.
inline std::vector<ScatterMatrix> build_scatter_matrices(const SpatialDataset& whitened, const Partition& part,
                                                         const MethodSpec& spec,
                                                         const std::vector<NeighborGraph>* graphs = nullptr) {
    spec.validate();
    if (graphs && graphs->size() != spec.kernels.size())
        throw DomainError("one neighbor graph per kernel expected");
    std::vector<ScatterMatrix> out;
    const bool comb = spec.method == Method::comb;
    if (spec.method == Method::sir || comb)
        out.push_back(compute_m_mean(whitened, part));
    if (spec.method == Method::save || comb)
        out.push_back(compute_m_var(whitened, part));
    if (spec.method == Method::cor || comb) {
        for (std::size_t i = 0; i < spec.kernels.size(); ++i) {
            const auto& k = spec.kernels[i];
            out.push_back(graphs ? compute_m_cor(whitened, part, (*graphs)[i], k, spec.scaled)
                                 : compute_m_cor(whitened, part, k, spec.scaled));
        }
    }
    return out;
}

inline std::vector<NeighborGraph> kernel_graphs(const Locations& loc, const MethodSpec& spec) {
    std::vector<NeighborGraph> graphs;
    if (spec.method == Method::cor || spec.method == Method::comb)
        for (const auto& k : spec.kernels)
            graphs.push_back(build_neighbor_graph(loc, k));
    else
        graphs.resize(spec.kernels.size());
    return graphs;
}

/// Rotation whose columns are ordered by descending score, with the
/// (pseudo-)eigenvalues that produced the scores.
struct Decomposition {
    Eigen::MatrixXd rotation;
    Eigen::MatrixXd pseudo_eigenvalues;  // m x p
    Eigen::VectorXd scores;              // sum over rows of |pseudo_eigenvalues|
    bool converged = true;
};

/// One matrix: eigendecomposition ordered by |eigenvalue|. Several:
/// approximate joint diagonalization ordered by summed |pseudo-eigenvalue|.
inline Decomposition decompose(const std::vector<Eigen::MatrixXd>& mats) {
    if (mats.empty())
        throw DomainError("nothing to decompose");
    if (mats.size() == 1) {
        const auto eig = sym_eig(mats.front());
        const Eigen::VectorXd abs_values = eig.values.cwiseAbs();
        const auto order = descending_order(abs_values);
        const Index p = eig.values.size();
        Decomposition d;
        d.rotation.resize(p, p);
        d.pseudo_eigenvalues.resize(1, p);
        d.scores.resize(p);
        for (Index c = 0; c < p; ++c) {
            const Index src = order[static_cast<std::size_t>(c)];
            d.rotation.col(c) = eig.vectors.col(src);
            d.pseudo_eigenvalues(0, c) = eig.values(src);
            d.scores(c) = abs_values(src);
        }
        return d;
    }
    auto jd = joint_diagonalize(mats);
    if (!jd.converged)
        warn("joint diagonalization stopped after " + std::to_string(jd.sweeps) + " sweeps without converging");
    return {std::move(jd.rotation), std::move(jd.pseudo_eigenvalues), std::move(jd.scores), jd.converged};
}

inline Decomposition decompose(const std::vector<ScatterMatrix>& scatter) {
    std::vector<Eigen::MatrixXd> mats;
    for (const auto& s : scatter)
        mats.push_back(s.matrix);
    return decompose(mats);
}

struct SsaFit {
    MethodSpec spec;
    Eigen::VectorXd center;
    Eigen::MatrixXd whitener;
    Eigen::MatrixXd rotation;            // p x p, columns by descending score
    Eigen::MatrixXd pseudo_eigenvalues;  // m x p
    Eigen::VectorXd scores;
    int q = 0;
    Eigen::MatrixXd w_n;  // q x p
    Eigen::MatrixXd w_s;  // (p - q) x p
    std::vector<ScatterMatrix> scatter;
    bool converged = true;

    Index p() const { return whitener.rows(); }

    /// Stacked [W_n; W_s].
    Eigen::MatrixXd unmixing() const {
        Eigen::MatrixXd w(p(), p());
        w << w_n, w_s;
        return w;
    }

    /// Number of scores above `threshold`; a diagnostic, the split uses q.
    int count_above(double threshold) const { return static_cast<int>((scores.array() > threshold).count()); }
};

namespace detail {

inline void split_unmixing(SsaFit& fit) {
    const Eigen::MatrixXd w = fit.rotation.transpose() * fit.whitener;
    fit.w_n = w.topRows(fit.q);
    fit.w_s = w.bottomRows(fit.p() - fit.q);
}

inline void check_q(int q, Index p) {
    if (q < 1 || q > p - 1)
        throw ConfigError("q", "q must lie in [1, p-1] = [1, " + std::to_string(p - 1) + "], got " +
                                   std::to_string(q));
}

}  // namespace detail

inline SsaFit fit_spssa(const SpatialDataset& data, const Partition& part, const MethodSpec& spec, int q,
                        const std::vector<NeighborGraph>* graphs = nullptr) {
    spec.validate();
    detail::check_q(q, data.p());
    if (part.n() != data.n())
        throw DomainError("partition covers " + std::to_string(part.n()) + " points but the dataset has " +
                          std::to_string(data.n()));
    const auto w = whiten(data);

    SsaFit fit;
    fit.spec = spec;
    fit.center = w.center;
    fit.whitener = w.whitener;
    fit.scatter = build_scatter_matrices(w.whitened, part, spec, graphs);
    auto dec = decompose(fit.scatter);
    fit.rotation = std::move(dec.rotation);
    fit.pseudo_eigenvalues = std::move(dec.pseudo_eigenvalues);
    fit.scores = std::move(dec.scores);
    fit.converged = dec.converged;
    fit.q = q;
    detail::split_unmixing(fit);
    return fit;
}

/// Random-guess reference: W = U^T Cov^{-1/2} with U Haar orthogonal; the
/// first q rows are taken as the nonstationary block.
inline SsaFit random_baseline(const SpatialDataset& data, int q, Rng& rng) {
    detail::check_q(q, data.p());
    const auto w = whiten(data);
    SsaFit fit;
    fit.center = w.center;
    fit.whitener = w.whitener;
    fit.rotation = random_orthogonal(data.p(), rng);
    fit.scores = Eigen::VectorXd::Zero(data.p());
    fit.q = q;
    detail::split_unmixing(fit);
    return fit;
}

struct SubspaceSplit {
    Eigen::MatrixXd nonstationary;  // n x q
    Eigen::MatrixXd stationary;     // n x (p - q)
};

inline SubspaceSplit extract_components(const SsaFit& fit, const SpatialDataset& data) {
    if (data.p() != fit.p())
        throw DomainError("dataset has " + std::to_string(data.p()) + " variables but the fit expects " +
                          std::to_string(fit.p()));
    const Eigen::MatrixXd centered = data.values.rowwise() - fit.center.transpose();
    return {centered * fit.w_n.transpose(), centered * fit.w_s.transpose()};
}

/// Orthogonal projector onto the row space of a full-row-rank k x p block.
inline Eigen::MatrixXd projector_of(const Eigen::MatrixXd& w_block) {
    const Index k = w_block.rows();
    if (k < 1 || k > w_block.cols())
        throw DomainError("projector needs a k x p block with 1 <= k <= p");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(w_block.transpose());
    qr.setThreshold(1e-12);
    if (qr.rank() < k)
        throw DomainError("projector block is rank deficient (rank " + std::to_string(qr.rank()) + " < " +
                          std::to_string(k) + ")");
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(w_block.cols(), k);
    Eigen::MatrixXd p = q * q.transpose();
    return 0.5 * (p + p.transpose());
}

/// 1/2 ||P - P_hat||_F^2 between two orthogonal projectors.
inline double subspace_distance(const Eigen::MatrixXd& p, const Eigen::MatrixXd& p_hat) {
    if (p.rows() != p_hat.rows() || p.cols() != p_hat.cols() || p.rows() != p.cols())
        throw DomainError("projectors must be square with equal shape");
    for (const Eigen::MatrixXd* m : {&p, &p_hat}) {
        if ((*m - m->transpose()).cwiseAbs().maxCoeff() > 1e-6 || (*m * *m - *m).cwiseAbs().maxCoeff() > 1e-6)
            throw DomainError("subspace_distance input is not an orthogonal projector");
    }
    return 0.5 * (p - p_hat).squaredNorm();
}

}  // namespace spssa
