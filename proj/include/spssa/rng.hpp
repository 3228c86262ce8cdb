#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace spssa {

/// SplitMix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seeded generator with hierarchical child streams.
///
/// `child(tag)` depends only on this generator's seed and the tag, never on
/// how many numbers have been drawn, so trial `t` of a benchmark sees the
/// same stream whether trials run serially, in parallel, or alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    Rng child(std::uint64_t tag) const { return Rng(mix_seed(seed_ ^ mix_seed(tag + 0x632BE59BD9B4E019ULL))); }

    double normal() { return normal_(engine_); }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * std::generate_canonical<double, 53>(engine_);
    }

    /// rows x cols matrix of independent standard normals, filled column-major.
    Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd z(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                z(i, j) = normal();
        return z;
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed p x p orthogonal matrix: QR of a Gaussian matrix with
/// the columns of Q sign-corrected by the signs of diag(R).
inline Eigen::MatrixXd random_orthogonal(Eigen::Index p, Rng& rng) {
    const Eigen::MatrixXd g = rng.normal_matrix(p, p);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < p; ++j)
        if (r(j, j) < 0.0)
            q.col(j) *= -1.0;
    return q;
}

}  // namespace spssa
