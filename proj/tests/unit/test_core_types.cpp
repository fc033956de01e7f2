#include <gtest/gtest.h>

#include <helm/core_types.hpp>
#include <helm/error.hpp>

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <set>

using namespace helm;

TEST(Normalization, MatchesTwoPassStatistics) {
    RngStream rng(1);
    Matrix x = rng.uniform_matrix(300, 6, -5.0, 9.0);
    x.col(2).array() *= 1e3;
    const NormalizationStats s = fit_normalization(x);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        std::vector<double> col(x.col(j).data(), x.col(j).data() + x.rows());
        EXPECT_NEAR(s.mean[j], oracle::mean(col), 1e-12 * std::max(1.0, std::abs(s.mean[j])));
        const double k = static_cast<double>(col.size());
        EXPECT_NEAR(s.std[j], std::sqrt(oracle::variance(col) * (k - 1) / k), 1e-10 * s.std[j]);
    }
    const Matrix z = apply_normalization(x, s);
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        EXPECT_NEAR(z.col(j).mean(), 0.0, 1e-12);
        const double var = (z.col(j).array() - z.col(j).mean()).square().sum() / z.rows();
        EXPECT_NEAR(var, 1.0, 1e-12);
    }
}

TEST(Normalization, TwoPointColumn) {
    Matrix x(2, 1);
    x << 0, 2;
    const NormalizationStats s = fit_normalization(x);
    EXPECT_DOUBLE_EQ(s.mean[0], 1.0);
    EXPECT_DOUBLE_EQ(s.std[0], 1.0);
}

TEST(Normalization, MeanRowsMapToZeroAndUnitStatsAreIdentity) {
    RngStream rng(4);
    const Matrix x = rng.uniform_matrix(10, 3, -1.0, 1.0);
    const NormalizationStats s = fit_normalization(x);
    const Matrix m = s.mean.transpose().replicate(5, 1);
    EXPECT_LT(apply_normalization(m, s).cwiseAbs().maxCoeff(), 1e-15);
    NormalizationStats unit{Vector::Zero(3), Vector::Ones(3)};
    EXPECT_EQ(apply_normalization(x, unit), x);
}

TEST(Normalization, InvertRoundTrips) {
    RngStream rng(2);
    const Matrix x = rng.uniform_matrix(50, 4, -1.0, 3.0);
    const NormalizationStats s = fit_normalization(x);
    const Matrix back = invert_normalization(apply_normalization(x, s), s);
    EXPECT_LT((back - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Normalization, ConstantColumnKeepsUnitScale) {
    Matrix x(3, 2);
    x << 1, 5, 2, 5, 3, 5;
    const NormalizationStats s = fit_normalization(x);
    EXPECT_EQ(s.mean[1], 5.0);
    EXPECT_EQ(s.std[1], 1.0);
    const Matrix z = apply_normalization(x, s);
    EXPECT_TRUE(z.col(1).isZero());
    EXPECT_TRUE(z.allFinite());
}

TEST(Normalization, RejectsBadInput) {
    EXPECT_THROW(fit_normalization(Matrix(1, 3)), InvalidArgument);
    EXPECT_THROW(fit_normalization(Matrix(0, 3)), InvalidArgument);
    Matrix x = Matrix::Ones(3, 2);
    x(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(fit_normalization(x), NumericalError);
    const NormalizationStats s = fit_normalization(Matrix::Random(5, 2));
    EXPECT_THROW(apply_normalization(Matrix::Ones(3, 3), s), DimensionError);
}

TEST(RngStream, SameSeedAndStreamReproduce) {
    RngStream a(42, 3), b(42, 3), c(42, 4);
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform(0.0, 1.0);
        EXPECT_EQ(x, b.uniform(0.0, 1.0));
        EXPECT_NE(x, c.uniform(0.0, 1.0));
    }
}

TEST(RngStream, ChildDoesNotConsumeParent) {
    RngStream a(5), b(5);
    RngStream ca = a.child(17);
    (void)ca.uniform(0, 1);
    EXPECT_EQ(a.uniform(0, 1), b.uniform(0, 1));
    RngStream c1 = b.child(17), c2 = b.child(17), c3 = b.child(18);
    const double x = c1.normal(0, 1);
    EXPECT_EQ(x, c2.normal(0, 1));
    EXPECT_NE(x, c3.normal(0, 1));
}

TEST(RngStream, UniformPassesKolmogorovSmirnov) {
    RngStream rng(123);
    std::vector<double> v(20000);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    const double d = oracle::ks_uniform(v, -1.0, 1.0);
    EXPECT_GT(oracle::ks_pvalue(d, v.size()), 1e-3) << "D = " << d;
}

TEST(RngStream, UniformMatrixIsRowMajorAndInRange) {
    RngStream a(9), b(9);
    const Matrix m = a.uniform_matrix(3, 4, -1.0, 1.0);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) EXPECT_EQ(m(i, j), b.uniform(-1.0, 1.0));
    }
    EXPECT_LE(m.maxCoeff(), 1.0);
    EXPECT_GE(m.minCoeff(), -1.0);
}

TEST(RngStream, UniformIntCoversClosedRange) {
    RngStream rng(7);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.uniform_int(1, 5);
        ASSERT_GE(v, 1);
        ASSERT_LE(v, 5);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 5u);
}

TEST(RngStream, NormalMoments) {
    RngStream rng(77);
    std::vector<double> v(50000);
    for (auto& x : v) x = rng.normal(2.0, 0.5);
    EXPECT_NEAR(oracle::mean(v), 2.0, 5 * 0.5 / std::sqrt(50000.0));
    EXPECT_NEAR(std::sqrt(oracle::variance(v)), 0.5, 0.01);
}
