#include <gtest/gtest.h>

#include <helm/elm.hpp>
#include <helm/error.hpp>
#include <helm/fista.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace helm;

namespace {

FistaParams tight(double lambda) {
    FistaParams p;
    p.lambda = lambda;
    p.epsilon = 1e-13;
    p.max_iter = 200000;
    return p;
}

}  // namespace

TEST(SoftThreshold, Examples) {
    Matrix c(1, 3);
    c << 1.0, -0.1, -2.0;
    const Matrix a = soft_threshold(c.leftCols(2), 0.25);
    EXPECT_DOUBLE_EQ(a(0, 0), 0.75);
    EXPECT_EQ(a(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(soft_threshold(c.rightCols(1), 0.5)(0, 0), -1.5);
}

TEST(SpectralNorm, MatchesSvd) {
    RngStream rng(30);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix h = rng.uniform_matrix(60, 12, -1.0, 1.0);
        const double s = Eigen::JacobiSVD<Matrix>(h).singularValues()[0];
        EXPECT_NEAR(spectral_norm(h), s, 1e-6 * s);
    }
}

TEST(Fista, UnregularizedIdentityDesignReturnsTarget) {
    RngStream rng(31);
    const Matrix x = rng.uniform_matrix(6, 3, -1.0, 1.0);
    const FistaResult r = fista_solve(Matrix::Identity(6, 6), x, tight(0.0));
    EXPECT_TRUE(r.converged);
    EXPECT_LT((r.beta - x).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Fista, ScalarProblemMatchesGridSearch) {
    const Matrix h = Matrix::Constant(1, 1, 1.0);
    const Matrix x = Matrix::Constant(1, 1, 1.0);
    double best = 0.0, best_f = std::numeric_limits<double>::infinity();
    for (int i = -200000; i <= 200000; ++i) {
        const double b = i * 1e-5;
        const double f = (b - 1.0) * (b - 1.0) + 0.5 * std::abs(b);
        if (f < best_f) {
            best_f = f;
            best = b;
        }
    }
    const FistaResult r = fista_solve(h, x, tight(0.5));
    EXPECT_NEAR(r.beta(0, 0), best, 1e-5);
    EXPECT_NEAR(r.beta(0, 0), 0.75, 1e-8);
}

TEST(Fista, MatchesCoordinateDescentOracle) {
    RngStream rng(32);
    const Matrix h = rng.uniform_matrix(30, 8, -1.0, 1.0);
    const Matrix x = rng.uniform_matrix(30, 8, -1.0, 1.0);
    const double lambda = 1e-2;
    const FistaResult r = fista_solve(h, x, tight(lambda));
    const Matrix ref = oracle::lasso_cd(h, x, lambda);
    EXPECT_NEAR(oracle::lasso_objective(h, x, r.beta, lambda),
                oracle::lasso_objective(h, x, ref, lambda), 1e-6);
    EXPECT_NEAR(lasso_objective(h, x, r.beta, lambda),
                oracle::lasso_objective(h, x, r.beta, lambda), 1e-9);
}

TEST(Fista, ObjectiveNotWorseThanZeroOrFirstIterate) {
    RngStream rng(33);
    const Matrix h = hidden(random_layer(10, 20, Activation::sigmoid, rng),
                            rng.uniform_matrix(300, 10, -1.0, 1.0));
    const Matrix x = rng.uniform_matrix(300, 10, -1.0, 1.0);
    FistaParams p;
    const FistaResult r = fista_solve(h, x, p);
    FistaParams one = p;
    one.max_iter = 1;
    const FistaResult r1 = fista_solve(h, x, one);
    const double f = lasso_objective(h, x, r.beta, p.lambda);
    EXPECT_LE(f, lasso_objective(h, x, Matrix::Zero(20, 10), p.lambda));
    EXPECT_LE(f, lasso_objective(h, x, r1.beta, p.lambda));
    EXPECT_EQ(r1.iterations, 1);
}

TEST(Fista, LargeLambdaGivesZero) {
    RngStream rng(34);
    const Matrix h = rng.uniform_matrix(20, 5, -1.0, 1.0);
    const Matrix x = rng.uniform_matrix(20, 3, -1.0, 1.0);
    // Zero is optimal once lambda >= 2 max |H^T X|.
    const double lambda = 2.0 * (h.transpose() * x).cwiseAbs().maxCoeff() * 1.01;
    EXPECT_TRUE(fista_solve(h, x, tight(lambda)).beta.isZero());
}

TEST(Fista, ReportsNonConvergence) {
    RngStream rng(35);
    const Matrix h = rng.uniform_matrix(50, 10, -1.0, 1.0);
    const Matrix x = rng.uniform_matrix(50, 4, -1.0, 1.0);
    FistaParams p;
    p.max_iter = 2;
    p.epsilon = 1e-15;
    const FistaResult r = fista_solve(h, x, p);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 2);
}

TEST(Fista, StepFollowsSpectralNorm) {
    RngStream rng(36);
    const Matrix h = rng.uniform_matrix(40, 6, -1.0, 1.0);
    const double s = spectral_norm(h);
    const FistaResult r = fista_solve(h, Matrix::Ones(40, 2), FistaParams{});
    EXPECT_NEAR(r.step, 0.9 / (2.0 * (1.0 + s * s)), 1e-15);
}

TEST(Fista, WarmStartAtOptimumStaysPut) {
    RngStream rng(37);
    const Matrix h = rng.uniform_matrix(30, 5, -1.0, 1.0);
    const Matrix x = rng.uniform_matrix(30, 2, -1.0, 1.0);
    const Matrix ref = oracle::lasso_cd(h, x, 0.1);
    FistaParams p = tight(0.1);
    const FistaResult r = fista_solve(h, x, p, ref);
    EXPECT_LT((r.beta - ref).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE(r.iterations, 3);
}

TEST(Fista, RejectsBadParameters) {
    const Matrix h = Matrix::Ones(3, 2), x = Matrix::Ones(3, 1);
    FistaParams p;
    p.delta = 1.0;
    EXPECT_THROW(fista_solve(h, x, p), InvalidArgument);
    p = FistaParams{};
    p.lambda = -1;
    EXPECT_THROW(fista_solve(h, x, p), InvalidArgument);
    p = FistaParams{};
    p.max_iter = 0;
    EXPECT_THROW(fista_solve(h, x, p), InvalidArgument);
    EXPECT_THROW(fista_solve(h, Matrix::Ones(4, 1), FistaParams{}), DimensionError);
}
