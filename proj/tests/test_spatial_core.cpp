#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"

using namespace spssa;

namespace {

SpatialDataset rows(std::initializer_list<std::initializer_list<double>> vals) {
    SpatialDataset d;
    const auto n = static_cast<Index>(vals.size());
    const auto p = static_cast<Index>(vals.begin()->size());
    d.locations.resize(n, 2);
    d.values.resize(n, p);
    Index i = 0;
    for (const auto& r : vals) {
        d.locations.row(i) << static_cast<double>(i), 0.0;
        Index j = 0;
        for (double v : r)
            d.values(i, j++) = v;
        ++i;
    }
    return d;
}

}  // namespace

TEST(Kernel, BallIndicator) {
    EXPECT_EQ(kernel_eval(KernelSpec::ball(1.0), {0.5, 0.0}), 1.0);
    EXPECT_EQ(kernel_eval(KernelSpec::ball(1.0), {1.0, 0.0}), 1.0);
    EXPECT_EQ(kernel_eval(KernelSpec::ball(1.0), {1.0, 0.01}), 0.0);
}

TEST(Kernel, RingExcludesInnerRadius) {
    const auto ring = KernelSpec::ring(1.0, 2.0);
    EXPECT_EQ(kernel_eval(ring, {1.0, 0.0}), 0.0);
    EXPECT_EQ(kernel_eval(ring, {1.5, 0.0}), 1.0);
    EXPECT_EQ(kernel_eval(ring, {0.0, 2.0}), 1.0);
}

TEST(Kernel, GaussianAtOriginAndQuantile) {
    const auto g = KernelSpec::gaussian(1.0);
    EXPECT_EQ(kernel_eval(g, {0.0, 0.0}), 1.0);
    // at distance r the weight is exp(-q95^2 / 2)
    EXPECT_NEAR(kernel_eval(g, {1.0, 0.0}), std::exp(-0.5 * 1.6448536269514722 * 1.6448536269514722), 1e-15);
}

TEST(Kernel, InvalidParametersAreConfigErrors) {
    EXPECT_THROW(KernelSpec::ball(-1.0), ConfigError);
    EXPECT_THROW(KernelSpec::ring(2.0, 1.0), ConfigError);
    EXPECT_THROW(KernelSpec::gaussian(0.0), ConfigError);
    try {
        KernelSpec::ring(1.0, 1.0);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "kernel");
    }
}

TEST(Kernel, ParseGrammar) {
    EXPECT_EQ(parse_kernel("ball:3.4"), KernelSpec::ball(3.4));
    EXPECT_EQ(parse_kernel("ring:1,2"), KernelSpec::ring(1.0, 2.0));
    EXPECT_EQ(parse_kernel("gauss:2"), KernelSpec::gaussian(2.0));
    for (const char* bad : {"ball", "ball:", "ball:x", "ring:1", "ring:2,1", "disk:1", "ball:1,2"})
        EXPECT_THROW(parse_kernel(bad), ConfigError) << bad;
}

TEST(Kernel, RotationInvariance) {
    Rng rng(11);
    const std::vector<KernelSpec> kernels{KernelSpec::ball(1.3), KernelSpec::ring(0.5, 1.7),
                                          KernelSpec::gaussian(1.1)};
    for (int t = 0; t < 200; ++t) {
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        Eigen::Matrix2d rot;
        rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
        // lattice-free radii so rounding cannot cross an indicator edge
        const Eigen::Vector2d h(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5));
        const Eigen::Vector2d rh = rot * h;
        for (const auto& k : kernels) {
            if (k.kind == KernelSpec::Kind::gaussian) {
                EXPECT_NEAR(kernel_eval(k, h), kernel_eval(k, rh), 1e-12);
            } else {
                const double edge_gap = std::min({std::abs(h.norm() - k.r), std::abs(h.norm() - k.r1),
                                                  std::abs(h.norm() - k.r2)});
                if (edge_gap > 1e-9) {
                    EXPECT_EQ(kernel_eval(k, h), kernel_eval(k, rh));
                }
            }
        }
    }
}

TEST(NeighborGraph, MatchesAllPairsScan) {
    const auto d = oracle::random_dataset(300, 1, 5, 12.0);
    for (const auto& k : {KernelSpec::ball(1.5), KernelSpec::ring(0.7, 2.1), KernelSpec::gaussian(0.6)}) {
        const auto g = build_neighbor_graph(d.locations, k);
        ASSERT_EQ(g.n(), d.n());
        for (Index i = 0; i < d.n(); ++i) {
            std::vector<std::pair<Index, double>> expect;
            for (Index j = 0; j < d.n(); ++j) {
                const double w = k((d.locations.row(i) - d.locations.row(j)).norm());
                if (j != i && w != 0.0)
                    expect.emplace_back(j, w);
            }
            ASSERT_EQ(static_cast<std::size_t>(g.degree(i)), expect.size());
            for (std::size_t t = 0; t < expect.size(); ++t) {
                const auto pos = static_cast<std::size_t>(g.offsets[static_cast<std::size_t>(i)]) + t;
                EXPECT_EQ(g.neighbors[pos], expect[t].first);
                EXPECT_EQ(g.weights[pos], expect[t].second);
            }
        }
    }
}

TEST(LocalMean, SmallCases) {
    const auto one = rows({{3.0, -1.0}});
    const std::vector<Index> i0{0};
    EXPECT_TRUE(local_mean(one, i0).isApprox(Eigen::Vector2d(3.0, -1.0)));
    const auto two = rows({{1.0, 3.0}, {3.0, 5.0}});
    const std::vector<Index> i01{0, 1};
    EXPECT_TRUE(local_mean(two, i01).isApprox(Eigen::Vector2d(2.0, 4.0)));
    EXPECT_THROW(local_mean(two, std::vector<Index>{}), DomainError);
}

TEST(LocalMean, MatchesOracle) {
    const auto d = oracle::random_dataset(50, 4, 7);
    const auto idx = all_indices(50);
    EXPECT_LT((local_mean(d, idx) - oracle::mean(d.values, idx)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LocalCov, UsesOneOverNDivisor) {
    const auto d = rows({{-1.0}, {1.0}});
    EXPECT_DOUBLE_EQ(local_cov(d, all_indices(2))(0, 0), 1.0);
    EXPECT_THROW(local_cov(d, std::vector<Index>{0}), DomainError);
}

TEST(LocalCov, ConstantSubdomainIsZero) {
    const auto d = rows({{2.0, 5.0}, {2.0, 5.0}, {2.0, 5.0}});
    EXPECT_EQ(local_cov(d, all_indices(3)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LocalCov, MatchesOracleAndIsPsd) {
    const auto d = oracle::random_dataset(100, 3, 8);
    const auto idx = all_indices(100);
    const auto c = local_cov(d, idx);
    EXPECT_LT((c - oracle::cov(d.values, idx)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ((c - c.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues().minCoeff(), -1e-10);
}

TEST(LocalSpatialCov, EmptySupportIsZero) {
    const auto d = oracle::random_dataset(40, 2, 9);
    double min_dist = 1e300;
    for (Index i = 0; i < d.n(); ++i)
        for (Index j = i + 1; j < d.n(); ++j)
            min_dist = std::min(min_dist, (d.locations.row(i) - d.locations.row(j)).norm());
    for (bool scaled : {false, true})
        EXPECT_EQ(local_spatial_cov(d, all_indices(40), KernelSpec::ball(0.5 * min_dist), scaled)
                      .cwiseAbs()
                      .maxCoeff(),
                  0.0);
}

TEST(LocalSpatialCov, TwoPointHandComputation) {
    SpatialDataset d;
    d.locations.resize(2, 2);
    d.locations << 0.0, 0.0, 0.5, 0.0;
    d.values.resize(2, 1);
    d.values << 1.5, -1.5;  // centered: a = 1.5, b = -1.5
    for (bool scaled : {false, true})
        EXPECT_NEAR(local_spatial_cov(d, all_indices(2), KernelSpec::ball(1.0), scaled)(0, 0), -2.25, 1e-15);
}

TEST(LocalSpatialCov, MatchesBruteForceOracle) {
    const auto d = oracle::random_dataset(80, 2, 10, 8.0);
    const auto idx = all_indices(80);
    for (const auto& k : {KernelSpec::ball(2.0), KernelSpec::ring(1.0, 2.0), KernelSpec::gaussian(1.0)})
        for (bool scaled : {false, true})
            EXPECT_LT((local_spatial_cov(d, idx, k, scaled) - oracle::lcov(d, idx, k, scaled)).cwiseAbs().maxCoeff(),
                      1e-10)
                << k.to_string() << " scaled=" << scaled;
}

TEST(LocalSpatialCov, SubsetMatchesOracle) {
    const auto d = oracle::random_dataset(120, 3, 12, 8.0);
    std::vector<Index> idx;
    for (Index i = 0; i < d.n(); i += 3)
        idx.push_back(i);
    for (bool scaled : {false, true})
        EXPECT_LT((local_spatial_cov(d, idx, KernelSpec::ball(2.5), scaled) -
                   oracle::lcov(d, idx, KernelSpec::ball(2.5), scaled))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-10);
}

TEST(LocalSpatialCov, ScalingAbsorbedIntoWeights) {
    const auto d = oracle::random_dataset(90, 3, 13, 8.0);
    const auto idx = all_indices(90);
    const auto f = KernelSpec::ball(1.8);
    auto dist = [&](Index i, Index j) { return (d.locations.row(i) - d.locations.row(j)).norm(); };
    std::vector<double> total(90, 0.0);
    for (Index i : idx)
        for (Index j : idx)
            if (j != i)
                total[static_cast<std::size_t>(i)] += f(dist(i, j));
    const auto absorbed = local_spatial_cov_weighted(d, idx, [&](Index i, Index j) {
        const double t = total[static_cast<std::size_t>(i)];
        return t == 0.0 ? 0.0 : f(dist(i, j)) / t;
    });
    EXPECT_LT((absorbed - local_spatial_cov(d, idx, f, true)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LocalSpatialCov, IsolatedPointContributesZero) {
    SpatialDataset d;
    d.locations.resize(3, 2);
    d.locations << 0.0, 0.0, 0.5, 0.0, 10.0, 10.0;
    d.values.resize(3, 1);
    d.values << 1.0, 2.0, 6.0;
    // mean 3; only the first two points are neighbors: (1-3)(2-3) twice over 3 points
    EXPECT_NEAR(local_spatial_cov(d, all_indices(3), KernelSpec::ball(1.0), true)(0, 0), 4.0 / 3.0, 1e-15);
}

TEST(Whiten, IdentityWhenAlreadyWhite) {
    SpatialDataset d;
    d.locations = Locations::Zero(4, 2);
    d.locations.col(0) << 0, 1, 2, 3;
    d.values.resize(4, 2);
    d.values << 1, 1, -1, 1, 1, -1, -1, -1;
    const auto w = whiten(d);
    EXPECT_LT((w.whitened.values - d.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Whiten, Univariate) {
    SpatialDataset d;
    d.locations = Locations::Zero(2, 2);
    d.locations(1, 0) = 1.0;
    d.values.resize(2, 1);
    d.values << -2.0, 2.0;
    const auto w = whiten(d);
    EXPECT_NEAR(w.whitened.values(0, 0), -1.0, 1e-15);
    EXPECT_NEAR(w.whitened.values(1, 0), 1.0, 1e-15);
}

TEST(Whiten, IdentityCovarianceAndZeroMean) {
    auto d = oracle::random_dataset(400, 5, 14);
    Rng rng(15);
    d.values = d.values * rng.normal_matrix(5, 5) + Eigen::MatrixXd::Constant(400, 5, 3.0);
    const auto w = whiten(d);
    const auto idx = all_indices(400);
    EXPECT_LT((oracle::cov(w.whitened.values, idx) - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(oracle::mean(w.whitened.values, idx).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((w.whitener * w.dewhitener - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ((w.whitener - w.whitener.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Whiten, SingularCovarianceNamesEigenvalue) {
    auto d = oracle::random_dataset(50, 3, 16);
    d.values.col(2) = d.values.col(0) + d.values.col(1);
    try {
        whiten(d);
        FAIL();
    } catch (const SingularityError& e) {
        EXPECT_LT(std::abs(e.eigenvalue()), 1e-10);
        EXPECT_NE(std::string(e.what()).find("eigenvalue"), std::string::npos);
    }
}

TEST(Dataset, ValidationAndDuplicateWarning) {
    EXPECT_THROW(make_dataset(Locations::Zero(1, 2), Eigen::MatrixXd::Zero(1, 1)), DomainError);
    EXPECT_THROW(make_dataset(Locations::Zero(3, 2), Eigen::MatrixXd::Zero(2, 1)), DomainError);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 1);
    v(0, 0) = std::nan("");
    EXPECT_THROW(make_dataset(Locations::Zero(2, 2), v), DomainError);
    oracle::WarningCapture cap;
    make_dataset(Locations::Zero(2, 2), Eigen::MatrixXd::Zero(2, 1));
    ASSERT_EQ(cap.messages.size(), 1u);
    EXPECT_NE(cap.messages[0].find("duplicate"), std::string::npos);
}

TEST(Partition, RejectsEmptySubdomains) {
    EXPECT_THROW(Partition(std::vector<int>{0, 2}), DomainError);
    EXPECT_THROW(Partition(std::vector<int>{}), DomainError);
    EXPECT_THROW(Partition(std::vector<int>{0, -1}), DomainError);
}

TEST(GridPartition, CentersOfTwoByTwo) {
    Locations loc(4, 2);
    loc << 0.25, 0.25, 0.75, 0.25, 0.25, 0.75, 0.75, 0.75;
    const auto part = build_grid_partition(loc, 2, 2, Rect{0, 1, 0, 1});
    EXPECT_EQ(part.size(), 4);
    EXPECT_EQ(part.assignment(), (std::vector<int>{0, 1, 2, 3}));
}

TEST(GridPartition, OneByOneAndClosedUpperEdge) {
    Locations loc(3, 2);
    loc << 0, 0, 1, 1, 0.5, 1;
    EXPECT_EQ(build_grid_partition(loc, 1, 1).size(), 1);
    const auto part = build_grid_partition(loc, 2, 2);
    EXPECT_EQ(part.assignment()[1], part.assignment()[2]);  // (1,1) and (0.5,1) share the top-right cell
}

TEST(GridPartition, EmptyCellsDroppedWithWarning) {
    Locations loc(2, 2);
    loc << 0.1, 0.1, 0.9, 0.9;
    oracle::WarningCapture cap;
    const auto part = build_grid_partition(loc, 3, 3, Rect{0, 1, 0, 1});
    EXPECT_EQ(part.size(), 2);
    EXPECT_EQ(cap.messages.size(), 1u);
}

TEST(GridPartition, Errors) {
    Locations loc(2, 2);
    loc << 0, 0, 0, 1;
    EXPECT_THROW(build_grid_partition(loc, 2, 2), DomainError);  // zero width
    EXPECT_THROW(build_grid_partition(loc, 0, 2, Rect{0, 1, 0, 1}), ConfigError);
    EXPECT_THROW(build_grid_partition(loc, 2, 2, Rect{0.5, 1, 0, 1}), DomainError);
}

TEST(GridPartition, UniformSizesWithinMultinomialBand) {
    Rng rng(17);
    Locations loc(900, 2);
    for (Index i = 0; i < 900; ++i)
        loc.row(i) << rng.uniform(0, 30), rng.uniform(0, 30);
    const auto part = build_grid_partition(loc, 3, 3, Rect{0, 30, 0, 30});
    ASSERT_EQ(part.size(), 9);
    for (Index s : part.sizes()) {
        EXPECT_GE(s, 60);
        EXPECT_LE(s, 140);
    }
}

TEST(LabelPartition, FirstAppearanceOrder) {
    const auto part = build_label_partition(std::vector<std::string>{"a", "a", "b"});
    EXPECT_EQ(part.size(), 2);
    EXPECT_EQ(part.sizes(), (std::vector<Index>{2, 1}));
    EXPECT_EQ(build_label_partition(std::vector<int>{7, 7, 7}).size(), 1);
    EXPECT_EQ(build_label_partition(std::vector<std::string>{"z", "a", "z"}).assignment(),
              (std::vector<int>{0, 1, 0}));
}

TEST(LabelPartition, AgreesWithGridPartition) {
    const auto d = oracle::random_dataset(200, 1, 18);
    const auto grid = build_grid_partition(d, 3, 4);
    std::vector<std::string> labels;
    for (int a : grid.assignment())
        labels.push_back("cell" + std::to_string(a));
    const auto lab = build_label_partition(labels);
    EXPECT_TRUE(same_subdomains(grid, lab));
    EXPECT_EQ(lab.sizes().size(), grid.sizes().size());
}

TEST(Partition, WeightedMeansRecompose) {
    const auto d = oracle::random_dataset(150, 3, 19);
    const auto part = oracle::random_partition(150, 5, 20);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
    for (int k = 0; k < part.size(); ++k)
        sum += static_cast<double>(part.subdomain_size(k)) * local_mean(d, part.members(k));
    EXPECT_LT((sum - 150.0 * local_mean(d, all_indices(150))).cwiseAbs().maxCoeff(), 1e-10);
}
