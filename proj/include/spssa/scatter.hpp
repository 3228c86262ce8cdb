#pragma once
//
// Nonstationarity scatter matrices of a whitened field over a partition.
// With A^2 := A A^T and weights |U_k| / |U|:
//
//   M_mean = sum_k w_k m_k m_k^T
//   M_var  = sum_k w_k (I - Cov_k)^2
//   M_cor  = sum_k w_k (Lcov_U - Lcov_k)^2     (scaled or unscaled Lcov)
//

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spssa/error.hpp"
#include "spssa/spatial_core.hpp"

namespace spssa {

enum class ScatterKind { mean, var, cor };

inline std::string to_string(ScatterKind k) {
    switch (k) {
    case ScatterKind::mean: return "mean";
    case ScatterKind::var: return "var";
    case ScatterKind::cor: return "cor";
    }
    return "?";
}

struct ScatterMatrix {
    Eigen::MatrixXd matrix;
    ScatterKind kind = ScatterKind::mean;
    std::optional<KernelSpec> kernel;
    bool scaled = false;

    /// "mean", "var", "cor[ball:3.4]" or "cor_s[ball:3.4]" for the scaled variant.
    std::string label() const {
        if (kind != ScatterKind::cor)
            return to_string(kind);
        return std::string(scaled ? "cor_s" : "cor") + "[" + (kernel ? kernel->to_string() : "") + "]";
    }
};

namespace detail {

inline void check_scatter_inputs(const SpatialDataset& whitened, const Partition& part) {
    if (part.n() != whitened.n())
        throw DomainError("partition covers " + std::to_string(part.n()) + " points but the dataset has " +
                          std::to_string(whitened.n()));
    const double mean_norm = whitened.values.colwise().mean().norm();
    if (mean_norm >= 1e-6)
        warn("scatter input does not look whitened (global mean norm " + std::to_string(mean_norm) + ")");
}

inline double weight_of(const Partition& part, int k) {
    return static_cast<double>(part.subdomain_size(k)) / static_cast<double>(part.n());
}

}  // namespace detail

inline ScatterMatrix compute_m_mean(const SpatialDataset& whitened, const Partition& part) {
    detail::check_scatter_inputs(whitened, part);
    const Index p = whitened.p();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (int k = 0; k < part.size(); ++k) {
        const Eigen::VectorXd mk = local_mean(whitened, part.members(k));
        m.noalias() += detail::weight_of(part, k) * mk * mk.transpose();
    }
    return {0.5 * (m + m.transpose()), ScatterKind::mean, std::nullopt, false};
}

inline ScatterMatrix compute_m_var(const SpatialDataset& whitened, const Partition& part) {
    detail::check_scatter_inputs(whitened, part);
    const Index p = whitened.p();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (int k = 0; k < part.size(); ++k) {
        if (part.subdomain_size(k) < 2)
            throw DomainError("subdomain " + std::to_string(k) + " has fewer than 2 points");
        const Eigen::MatrixXd d = eye - local_cov(whitened, part.members(k));
        m.noalias() += detail::weight_of(part, k) * d * d.transpose();
    }
    return {0.5 * (m + m.transpose()), ScatterKind::var, std::nullopt, false};
}

/// M_cor from a neighbor graph built once for `whitened.locations`.
inline ScatterMatrix compute_m_cor(const SpatialDataset& whitened, const Partition& part, const NeighborGraph& graph,
                                   const KernelSpec& kernel, bool scaled) {
    detail::check_scatter_inputs(whitened, part);
    if (graph.n() != whitened.n())
        throw DomainError("neighbor graph does not match the dataset");
    for (int k = 0; k < part.size(); ++k)
        if (part.subdomain_size(k) < 2)
            throw DomainError("subdomain " + std::to_string(k) + " has fewer than 2 points");
    if (graph.neighbors.empty())
        warn("kernel " + kernel.to_string() + " has no point pairs in its support; M_cor is degenerate");

    const Index p = whitened.p();
    const auto everything = all_indices(whitened.n());
    const Eigen::MatrixXd global =
        detail::lcov_from_graph(whitened.values, everything, graph, nullptr, 0, scaled);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (int k = 0; k < part.size(); ++k) {
        const Eigen::MatrixXd d =
            global - detail::lcov_from_graph(whitened.values, part.members(k), graph, &part.assignment(), k, scaled);
        m.noalias() += detail::weight_of(part, k) * d * d.transpose();
    }
    return {0.5 * (m + m.transpose()), ScatterKind::cor, kernel, scaled};
}

inline ScatterMatrix compute_m_cor(const SpatialDataset& whitened, const Partition& part, const KernelSpec& kernel,
                                   bool scaled) {
    return compute_m_cor(whitened, part, build_neighbor_graph(whitened.locations, kernel), kernel, scaled);
}

}  // namespace spssa
