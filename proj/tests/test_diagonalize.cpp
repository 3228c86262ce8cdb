#include <gtest/gtest.h>

#include <algorithm>

#include "test_util.hpp"

using namespace spssa;

TEST(SymEig, Identity) {
    const auto e = sym_eig(Eigen::MatrixXd::Identity(4, 4));
    EXPECT_LT((e.values - Eigen::VectorXd::Ones(4)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_TRUE(oracle::same_columns_up_to_sign(e.vectors, Eigen::MatrixXd::Identity(4, 4), 1e-12));
}

TEST(SymEig, DiagonalSortedDescending) {
    const auto e = sym_eig(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix());
    EXPECT_LT((e.values - Eigen::Vector3d(3, 2, 1)).cwiseAbs().maxCoeff(), 1e-14);
    Eigen::Matrix3d expect;
    expect << 1, 0, 0, 0, 0, 1, 0, 1, 0;
    EXPECT_LT((e.vectors - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SymEig, ReconstructionOrthogonalityAndSigns) {
    Rng rng(1);
    const Eigen::MatrixXd m = oracle::random_symmetric(6, rng);
    const auto e = sym_eig(m);
    EXPECT_LT((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - m).norm(), 1e-9);
    EXPECT_LT((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
    for (Index i = 0; i < 6; ++i) {
        EXPECT_LT((m * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm(), 1e-8 * m.norm());
        Index arg = 0;
        e.vectors.col(i).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(e.vectors(arg, i), 0.0);
        if (i > 0) {
            EXPECT_GE(e.values(i - 1), e.values(i));
        }
    }
}

TEST(SymEig, AsymmetricIsDomainError) {
    Eigen::Matrix2d m;
    m << 1, 2, 3, 4;
    EXPECT_THROW(sym_eig(m), DomainError);
}

TEST(JointDiag, SingleMatrixIsEigendecomposition) {
    Rng rng(2);
    const Eigen::MatrixXd m = oracle::random_symmetric(5, rng);
    const std::vector<Eigen::MatrixXd> mats{m};
    const auto jd = joint_diagonalize(mats);
    EXPECT_TRUE(jd.converged);
    EXPECT_LT(off_diagonal_mass(mats, jd.rotation), 1e-10);
    std::vector<double> a(jd.pseudo_eigenvalues.data(), jd.pseudo_eigenvalues.data() + 5);
    const auto e = sym_eig(m);
    std::vector<double> b(e.values.data(), e.values.data() + 5);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (int i = 0; i < 5; ++i)
        EXPECT_NEAR(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)], 1e-10);
}

TEST(JointDiag, RecoversCommonRotationOfCommutingPair) {
    Rng rng(3);
    const Eigen::MatrixXd q = random_orthogonal(2, rng);
    const std::vector<Eigen::MatrixXd> mats{q * Eigen::Vector2d(1, 2).asDiagonal() * q.transpose(),
                                            q * Eigen::Vector2d(5, 3).asDiagonal() * q.transpose()};
    const auto jd = joint_diagonalize(mats);
    EXPECT_TRUE(jd.converged);
    EXPECT_TRUE(oracle::same_columns_up_to_sign(jd.rotation, q, 1e-10));
    for (const auto& m : mats) {
        const std::vector<Eigen::MatrixXd> one{m};
        EXPECT_LT(off_diagonal_mass(one, jd.rotation), 1e-10);
    }
}

TEST(JointDiag, CommutingFamilyInHigherDimension) {
    Rng rng(4);
    const Index p = 7;
    const Eigen::MatrixXd q = random_orthogonal(p, rng);
    std::vector<Eigen::MatrixXd> mats;
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Eigen::VectorXd d = rng.normal_matrix(p, 1);
        mats.push_back(q * d.asDiagonal() * q.transpose());
        total += mats.back().squaredNorm();
    }
    const auto jd = joint_diagonalize(mats);
    EXPECT_TRUE(jd.converged);
    EXPECT_LT(off_diagonal_mass(mats, jd.rotation) / total, 1e-8);
    EXPECT_LT(off_diagonal_mass(mats, jd.rotation), 1e-10);
    EXPECT_TRUE(oracle::same_columns_up_to_sign(jd.rotation, q, 1e-8));
}

TEST(JointDiag, DiagonalInputsKeepAxes) {
    const std::vector<Eigen::MatrixXd> mats{Eigen::Vector3d(1, 4, 2).asDiagonal().toDenseMatrix(),
                                            Eigen::Vector3d(0, 1, -3).asDiagonal().toDenseMatrix()};
    const auto jd = joint_diagonalize(mats);
    EXPECT_TRUE(oracle::same_columns_up_to_sign(jd.rotation, Eigen::MatrixXd::Identity(3, 3), 1e-14));
    EXPECT_LT((jd.scores - Eigen::Vector3d(5, 5, 1)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(JointDiag, MonotoneObjectiveNormInvarianceAndOrdering) {
    Rng rng(5);
    std::vector<Eigen::MatrixXd> mats;
    for (int i = 0; i < 4; ++i)
        mats.push_back(oracle::random_symmetric(6, rng));
    const auto jd = joint_diagonalize(mats);
    ASSERT_GE(jd.objective_history.size(), 2u);
    for (std::size_t i = 1; i < jd.objective_history.size(); ++i)
        EXPECT_GE(jd.objective_history[i], jd.objective_history[i - 1] - 1e-10);
    double before = 0.0, after = 0.0;
    for (const auto& m : mats) {
        before += m.squaredNorm();
        after += (jd.rotation.transpose() * m * jd.rotation).squaredNorm();
    }
    EXPECT_NEAR(before, after, 1e-10 * before);
    EXPECT_LT((jd.rotation.transpose() * jd.rotation - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
    for (Index j = 1; j < 6; ++j)
        EXPECT_GE(jd.scores(j - 1), jd.scores(j));
    EXPECT_GE(diagonal_objective(mats, jd.rotation), diagonal_objective(mats, Eigen::MatrixXd::Identity(6, 6)));
    for (Index j = 0; j < 6; ++j)
        EXPECT_NEAR(jd.scores(j), jd.pseudo_eigenvalues.col(j).cwiseAbs().sum(), 1e-14);
}

TEST(JointDiag, InputOrderDoesNotMatter) {
    Rng rng(6);
    std::vector<Eigen::MatrixXd> mats;
    for (int i = 0; i < 3; ++i)
        mats.push_back(oracle::random_symmetric(5, rng));
    auto reversed = mats;
    std::reverse(reversed.begin(), reversed.end());
    const auto a = joint_diagonalize(mats);
    const auto b = joint_diagonalize(reversed);
    EXPECT_TRUE(oracle::same_columns_up_to_sign(a.rotation, b.rotation, 1e-6));
    EXPECT_LT((a.scores - b.scores).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(JointDiag, NonConvergenceIsFlagged) {
    Rng rng(7);
    std::vector<Eigen::MatrixXd> mats;
    for (int i = 0; i < 3; ++i)
        mats.push_back(oracle::random_symmetric(6, rng));
    const auto jd = joint_diagonalize(mats, 1e-10, 1);
    EXPECT_FALSE(jd.converged);
    EXPECT_EQ(jd.sweeps, 1);
}

TEST(JointDiag, Errors) {
    EXPECT_THROW(joint_diagonalize(std::vector<Eigen::MatrixXd>{}), DomainError);
    EXPECT_THROW(joint_diagonalize(std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Identity(2, 2),
                                                                Eigen::MatrixXd::Identity(3, 3)}),
                 DomainError);
    Eigen::Matrix2d asym;
    asym << 0, 1, 0, 0;
    EXPECT_THROW(joint_diagonalize(std::vector<Eigen::MatrixXd>{asym}), DomainError);
}
