#include "frugal/gp.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "frugal/rng.hpp"

namespace frugal {
namespace {

// Training set shared with the externally computed fixed-hyperparameter
// oracle (6 points in 2-D, 3 query points).
void oracle_problem(Eigen::MatrixXd& x, Eigen::VectorXd& y, Eigen::MatrixXd& queries) {
    x.resize(6, 2);
    x << 0.2, -1.1, 1.5, 0.3, -0.7, 0.8, 2.2, -0.4, 0.9, 1.7, -1.8, -0.6;
    y.resize(6);
    y << 3.1, 1.4, 5.9, 0.7, 2.2, 4.8;
    queries.resize(3, 2);
    queries << 0.0, 0.0, 1.0, -1.0, -2.0, 1.5;
}

// Pin the hyperparameters by collapsing the search box to a hair's width.
GPConfig pinned_config(double c, double ell) {
    GPConfig config;
    config.constant_value = c;
    config.constant_bounds = {c * (1.0 - 1e-10), c * (1.0 + 1e-10)};
    config.length_scale = ell;
    config.length_scale_bounds = {ell * (1.0 - 1e-10), ell * (1.0 + 1e-10)};
    config.n_restarts = 1;
    return config;
}

// Posterior recomputed with a dense LU solve straight from the textbook
// formulas, independent of the Cholesky path under test.
void naive_posterior(const GPModel& model, const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                     Eigen::VectorXd& variance) {
    const auto n = model.train_x.rows();
    const auto m = queries.rows();
    const double c = model.constant_value;
    const double ell = model.length_scale;
    auto kernel = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        if (model.kernel == GpKernel::ConstantOnly) return c;
        return c * std::exp(-(a - b).squaredNorm() / (2.0 * ell * ell));
    };

    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(model.train_x.row(i), model.train_x.row(j));
    }
    k.diagonal().array() += model.alpha + model.jitter;

    Eigen::MatrixXd k_star(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) k_star(i, j) = kernel(model.train_x.row(i), queries.row(j));
    }

    const Eigen::MatrixXd k_inv = k.fullPivLu().inverse();
    mean = (k_star.transpose() * k_inv * model.train_y) * model.target_std;
    mean.array() += model.target_mean;
    variance.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        variance[j] = std::max(0.0, c - (k_star.col(j).transpose() * k_inv * k_star.col(j))(0, 0)) *
                      model.target_std * model.target_std;
    }
}

TEST(GpFit, FixedHyperparametersMatchExternalOracle) {
    Eigen::MatrixXd x, queries;
    Eigen::VectorXd y;
    oracle_problem(x, y, queries);
    const GPModel model = gp_fit(x, y, pinned_config(2.5, 0.8));

    EXPECT_NEAR(model.constant_value, 2.5, 2.5e-9);
    EXPECT_NEAR(model.length_scale, 0.8, 0.8e-9);
    EXPECT_NEAR(model.target_mean, 3.016666666666667, 1e-12);
    EXPECT_NEAR(model.target_std, 1.8324998105199235, 1e-12);
    EXPECT_NEAR(gp_log_marginal_likelihood(model, 2.5, 0.8), -9.240958929980014, 1e-9);

    const auto [mean, variance] = gp_predict(model, queries);
    const double expected_mean[3] = {4.062790676404813, 2.4507870055914305, 3.5573627792980087};
    const double expected_std[3] = {2.402591207011, 2.23036875215331, 2.850259312537493};
    for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(mean[j], expected_mean[j], 1e-7);
        EXPECT_NEAR(std::sqrt(variance[j]), expected_std[j], 1e-7);
    }
}

TEST(GpPredict, MatchesDenseNaiveSolveOnRandomProblems) {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd x(20, 2);
        Eigen::VectorXd y(20);
        for (int i = 0; i < 20; ++i) {
            x(i, 0) = rng.uniform() * 6.0 - 3.0;
            x(i, 1) = rng.uniform() * 6.0 - 3.0;
            y[i] = std::sin(x(i, 0)) + 0.5 * std::cos(2.0 * x(i, 1)) + 0.1 * rng.uniform();
        }
        Eigen::MatrixXd queries(7, 2);
        for (int i = 0; i < 7; ++i) {
            queries(i, 0) = rng.uniform() * 8.0 - 4.0;
            queries(i, 1) = rng.uniform() * 8.0 - 4.0;
        }

        GPConfig config;
        config.n_restarts = 2;
        config.seed = 100 + trial;
        const GPModel model = gp_fit(x, y, config);
        const auto [mean, variance] = gp_predict(model, queries);

        Eigen::VectorXd naive_mean, naive_var;
        naive_posterior(model, queries, naive_mean, naive_var);
        for (int j = 0; j < 7; ++j) {
            ASSERT_NEAR(mean[j], naive_mean[j], 1e-8) << "trial " << trial;
            ASSERT_NEAR(variance[j], naive_var[j], 1e-8) << "trial " << trial;
        }
    }
}

TEST(GpFit, NoiseFreeModelInterpolatesTrainingTargets) {
    Eigen::MatrixXd x(10, 2);
    Eigen::VectorXd y(10);
    int row = 0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 2; ++j) {
            x(row, 0) = 0.9 * i;
            x(row, 1) = 1.7 * j;
            y[row] = std::sin(x(row, 0)) + std::cos(x(row, 1));
            ++row;
        }
    }
    GPConfig config;
    config.alpha = 0.0;
    config.n_restarts = 4;
    const GPModel model = gp_fit(x, y, config);
    const auto [mean, variance] = gp_predict(model, x);
    for (int i = 0; i < 10; ++i) EXPECT_NEAR(mean[i], y[i], 1e-6);
}

TEST(GpFit, ConstantTargetsPredictThatConstantEverywhere) {
    Eigen::MatrixXd x(5, 2);
    x << 0, 0, 1, 0, 0, 1, 2, 2, -1, 1;
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 4.2);
    GPConfig config;
    config.n_restarts = 2;
    const GPModel model = gp_fit(x, y, config);
    Eigen::MatrixXd queries(3, 2);
    queries << 0.5, 0.5, -3.0, 2.0, 10.0, -10.0;
    const auto [mean, variance] = gp_predict(model, queries);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(mean[j], 4.2, 1e-6);
}

TEST(GpFit, SinglePointPredictsItsOwnTarget) {
    Eigen::MatrixXd x(1, 2);
    x << 0.0, 0.0;
    Eigen::VectorXd y(1);
    y << 3.0;
    GPConfig config;
    config.n_restarts = 2;
    const GPModel model = gp_fit(x, y, config);
    const auto [mean, variance] = gp_predict(model, x);
    EXPECT_NEAR(mean[0], 3.0, 1e-9);
}

TEST(GpFit, WithoutNormalizationTheMeanRevertsToZeroFarAway) {
    Eigen::MatrixXd x(4, 1);
    x << 0.0, 0.3, 0.6, 0.9;
    Eigen::VectorXd y(4);
    y << 5.0, 5.1, 4.9, 5.2;
    GPConfig config;
    config.normalize_targets = false;
    config.n_restarts = 2;
    const GPModel model = gp_fit(x, y, config);
    EXPECT_EQ(model.target_mean, 0.0);
    EXPECT_EQ(model.target_std, 1.0);
    Eigen::MatrixXd far(1, 1);
    far << 1e6;
    const auto [mean, variance] = gp_predict(model, far);
    EXPECT_NEAR(mean[0], 0.0, 1e-6);
}

TEST(GpFit, FittedPointBeatsEveryGridPointOnMarginalLikelihood) {
    Eigen::MatrixXd x, queries;
    Eigen::VectorXd y;
    oracle_problem(x, y, queries);
    GPConfig config;
    config.n_restarts = 5;
    const GPModel model = gp_fit(x, y, config);
    const double fitted = gp_log_marginal_likelihood(model, model.constant_value, model.length_scale);
    for (double log_c = std::log(0.01); log_c <= std::log(100.0) + 1e-9; log_c += std::log(10.0)) {
        for (double log_l = std::log(0.01); log_l <= std::log(100.0) + 1e-9; log_l += std::log(10.0)) {
            EXPECT_LE(gp_log_marginal_likelihood(model, std::exp(log_c), std::exp(log_l)), fitted + 1e-9);
        }
    }
}

TEST(GpFit, ConstantOnlyKernelPredictsTheSameValueEverywhere) {
    Eigen::MatrixXd x(6, 2);
    x << 0, 0, 1, 0, 0, 1, 1, 1, 2, 0, 0, 2;
    Eigen::VectorXd y(6);
    y << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
    GPConfig config;
    config.kernel = GpKernel::ConstantOnly;
    config.n_restarts = 2;
    const GPModel model = gp_fit(x, y, config);
    Eigen::MatrixXd queries(2, 2);
    queries << -5.0, -5.0, 7.0, 3.0;
    const auto [mean, variance] = gp_predict(model, queries);
    EXPECT_NEAR(mean[0], mean[1], 1e-9);
    EXPECT_NEAR(variance[0], variance[1], 1e-9);
}

TEST(GpFit, IsDeterministicGivenSeedAndSensitiveToIt) {
    Eigen::MatrixXd x, queries;
    Eigen::VectorXd y;
    oracle_problem(x, y, queries);
    GPConfig config;
    config.n_restarts = 3;
    config.seed = 5;
    const GPModel a = gp_fit(x, y, config);
    const GPModel b = gp_fit(x, y, config);
    EXPECT_EQ(a.constant_value, b.constant_value);
    EXPECT_EQ(a.length_scale, b.length_scale);
    const auto [mean_a, var_a] = gp_predict(a, queries);
    const auto [mean_b, var_b] = gp_predict(b, queries);
    EXPECT_EQ(mean_a, mean_b);
    EXPECT_EQ(var_a, var_b);
}

TEST(GpFit, DuplicatedNoiseFreePointsSurviveViaJitter) {
    Eigen::MatrixXd x(4, 1);
    x << 1.0, 1.0, 2.0, 3.0;
    Eigen::VectorXd y(4);
    y << 2.0, 2.0, 3.0, 4.0;
    GPConfig config;
    config.alpha = 0.0;
    config.n_restarts = 2;
    const GPModel model = gp_fit(x, y, config);
    const auto [mean, variance] = gp_predict(model, x);
    for (int i = 0; i < 4; ++i) {
        EXPECT_TRUE(std::isfinite(mean[i]));
        EXPECT_NEAR(mean[i], y[i], 0.05);
    }
}

TEST(CholeskyWithJitter, GivesUpOnIndefiniteMatrices) {
    Eigen::MatrixXd negative = -Eigen::MatrixXd::Identity(3, 3);
    double jitter = 0.0;
    EXPECT_THROW(detail::cholesky_with_jitter(negative, 0.0, jitter), NumericError);
}

TEST(GpValidation, RejectsBadConfigsAndInputs) {
    Eigen::MatrixXd x(2, 1);
    x << 0.0, 1.0;
    Eigen::VectorXd y(2);
    y << 1.0, 2.0;

    GPConfig config;
    config.alpha = -0.1;
    EXPECT_THROW(gp_fit(x, y, config), ConfigError);
    config = {};
    config.n_restarts = -1;
    EXPECT_THROW(gp_fit(x, y, config), ConfigError);
    config = {};
    config.constant_bounds = {10.0, 1.0};
    EXPECT_THROW(gp_fit(x, y, config), ConfigError);
    config = {};
    config.length_scale_bounds = {0.0, 1.0};
    EXPECT_THROW(gp_fit(x, y, config), ConfigError);

    config = {};
    EXPECT_THROW(gp_fit(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0), config), Error);
    EXPECT_THROW(gp_fit(x, Eigen::VectorXd::Ones(3), config), ShapeError);
    Eigen::VectorXd bad = y;
    bad[0] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(gp_fit(x, bad, config), NumericError);

    const GPModel model = gp_fit(x, y, config);
    EXPECT_THROW(gp_predict(model, Eigen::MatrixXd(1, 2)), ShapeError);
    EXPECT_THROW(gp_log_marginal_likelihood(model, 1e9, 1.0), DomainError);
    EXPECT_THROW(gp_log_marginal_likelihood(model, 1.0, 1e9), DomainError);
}

}  // namespace
}  // namespace frugal
