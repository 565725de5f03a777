#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "frugal/errors.hpp"
#include "frugal/rng.hpp"

namespace frugal {

// The cost regressor's kernel: a constant-amplitude RBF, or the amplitude
// alone (which regresses everything to one level; kept for comparison runs).
enum class GpKernel { ConstantTimesRbf, ConstantOnly };

struct GPConfig {
    double constant_value = 1.0;
    std::pair<double, double> constant_bounds{1e-3, 1e3};
    double length_scale = 1.0;
    std::pair<double, double> length_scale_bounds{1e-3, 1e3};
    double alpha = 0.1;  // noise added to the kernel diagonal
    int n_restarts = 10;
    bool normalize_targets = true;
    GpKernel kernel = GpKernel::ConstantTimesRbf;
    std::uint64_t seed = 0;
};

struct GPModel {
    Eigen::MatrixXd train_x;  // n x d
    Eigen::VectorXd train_y;  // normalized targets
    double target_mean = 0.0;
    double target_std = 1.0;
    double constant_value = 1.0;  // fitted amplitude
    double length_scale = 1.0;    // fitted length scale
    double alpha = 0.0;
    GpKernel kernel = GpKernel::ConstantTimesRbf;
    std::pair<double, double> constant_bounds{1e-3, 1e3};
    std::pair<double, double> length_scale_bounds{1e-3, 1e3};
    Eigen::MatrixXd chol_lower;  // L with L L^T = K + alpha I (+ jitter)
    Eigen::VectorXd dual;        // (K + alpha I)^-1 train_y
    double jitter = 0.0;         // diagonal boost the factorization needed
};

namespace detail {

inline Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::VectorXd a2 = a.rowwise().squaredNorm();
    Eigen::VectorXd b2 = b.rowwise().squaredNorm();
    Eigen::MatrixXd d = -2.0 * a * b.transpose();
    d.colwise() += a2;
    d.rowwise() += b2.transpose();
    return d.cwiseMax(0.0);
}

inline Eigen::MatrixXd kernel_from_sqdist(const Eigen::MatrixXd& sqdist, double c, double ell,
                                          GpKernel kernel) {
    if (kernel == GpKernel::ConstantOnly) {
        return Eigen::MatrixXd::Constant(sqdist.rows(), sqdist.cols(), c);
    }
    return c * (-sqdist / (2.0 * ell * ell)).array().exp().matrix();
}

// Cholesky of k + extra*I, escalating a diagonal jitter 1e-10 -> 1e-4 on
// failure before giving up.
inline Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& k, double extra, double& jitter_used) {
    double jitter = 0.0;
    for (;;) {
        Eigen::MatrixXd shifted = k;
        shifted.diagonal().array() += extra + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            jitter_used = jitter;
            return llt.matrixL();
        }
        jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
        if (jitter > 1e-4) {
            throw NumericError("Cholesky factorization failed even with jitter 1e-4");
        }
    }
}

inline double lml_from_factor(const Eigen::MatrixXd& chol_lower, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& dual) {
    const double n = static_cast<double>(y.size());
    return -0.5 * y.dot(dual) - chol_lower.diagonal().array().log().sum() -
           0.5 * n * std::log(2.0 * M_PI);
}

struct NelderMeadResult {
    Eigen::VectorXd best_x;
    double best_value = -std::numeric_limits<double>::infinity();
};

// Box-constrained Nelder-Mead maximization; candidates are clamped into
// [lo, hi] before evaluation. Returns the best point ever evaluated.
template <typename F>
NelderMeadResult nelder_mead_max(F&& objective, const Eigen::VectorXd& start, const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi, int max_evals = 200) {
    const int dim = static_cast<int>(start.size());
    NelderMeadResult result;
    int evals = 0;

    auto clamp = [&](Eigen::VectorXd x) {
        for (int i = 0; i < dim; ++i) x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
        return x;
    };
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        const double v = objective(x);
        if (v > result.best_value) {
            result.best_value = v;
            result.best_x = x;
        }
        return v;
    };

    std::vector<Eigen::VectorXd> simplex;
    std::vector<double> values;
    simplex.push_back(clamp(start));
    values.push_back(eval(simplex[0]));
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd v = simplex[0];
        const double step = 0.4;
        v[i] = v[i] + step <= hi[i] ? v[i] + step : v[i] - step;
        simplex.push_back(clamp(v));
        values.push_back(eval(simplex.back()));
    }

    while (evals < max_evals) {
        std::vector<int> order(simplex.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });

        const int best = order.front();
        const int worst = order.back();
        const int second_worst = order[order.size() - 2];
        if (values[best] - values[worst] < 1e-10) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (int i : order) {
            if (i != worst) centroid += simplex[i];
        }
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd reflected = clamp(centroid + (centroid - simplex[worst]));
        const double f_reflected = eval(reflected);
        if (f_reflected > values[best]) {
            const Eigen::VectorXd expanded = clamp(centroid + 2.0 * (centroid - simplex[worst]));
            const double f_expanded = eval(expanded);
            if (f_expanded > f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if (f_reflected > values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            const Eigen::VectorXd contracted = clamp(centroid + 0.5 * (simplex[worst] - centroid));
            const double f_contracted = eval(contracted);
            if (f_contracted > values[worst]) {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                for (std::size_t i = 0; i < simplex.size(); ++i) {
                    if (static_cast<int>(i) == best) continue;
                    simplex[i] = clamp(simplex[best] + 0.5 * (simplex[i] - simplex[best]));
                    values[i] = eval(simplex[i]);
                }
            }
        }
    }
    return result;
}

}  // namespace detail

inline void validate_gp_config(const GPConfig& config) {
    if (config.alpha < 0.0) throw ConfigError("gp: alpha must be >= 0");
    if (config.n_restarts < 0) throw ConfigError("gp: n_restarts must be >= 0");
    if (!(config.constant_bounds.first > 0.0 && config.constant_bounds.first < config.constant_bounds.second)) {
        throw ConfigError("gp: constant_bounds must satisfy 0 < lower < upper");
    }
    if (!(config.length_scale_bounds.first > 0.0 &&
          config.length_scale_bounds.first < config.length_scale_bounds.second)) {
        throw ConfigError("gp: length_scale_bounds must satisfy 0 < lower < upper");
    }
}

// Fits the kernel hyperparameters by maximizing the log marginal likelihood
// over log-space, from the configured start plus n_restarts random restarts
// inside the bounds; the best converged point wins.
inline GPModel gp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GPConfig& config) {
    validate_gp_config(config);
    const auto n = x.rows();
    if (n < 1) throw Error("gp_fit: need at least one training point");
    if (y.size() != n) throw ShapeError("gp_fit: input rows and target count differ");
    if (!y.allFinite()) throw NumericError("gp_fit: targets must be finite");

    GPModel model;
    model.train_x = x;
    model.alpha = config.alpha;
    model.kernel = config.kernel;
    model.constant_bounds = config.constant_bounds;
    model.length_scale_bounds = config.length_scale_bounds;
    if (config.normalize_targets) {
        model.target_mean = y.mean();
        model.target_std = std::max(std::sqrt((y.array() - model.target_mean).square().mean()), 1e-12);
    }
    model.train_y = (y.array() - model.target_mean) / model.target_std;

    const Eigen::MatrixXd sqdist = detail::squared_distances(x, x);
    const int dim = config.kernel == GpKernel::ConstantOnly ? 1 : 2;

    auto objective = [&](const Eigen::VectorXd& log_params) {
        const double c = std::exp(log_params[0]);
        const double ell = dim == 2 ? std::exp(log_params[1]) : config.length_scale;
        Eigen::MatrixXd k = detail::kernel_from_sqdist(sqdist, c, ell, config.kernel);
        try {
            double jitter = 0.0;
            Eigen::MatrixXd chol = detail::cholesky_with_jitter(k, config.alpha, jitter);
            Eigen::VectorXd dual = chol.transpose().triangularView<Eigen::Upper>().solve(
                chol.triangularView<Eigen::Lower>().solve(model.train_y));
            return detail::lml_from_factor(chol, model.train_y, dual);
        } catch (const NumericError&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    Eigen::VectorXd lo(dim);
    Eigen::VectorXd hi(dim);
    lo[0] = std::log(config.constant_bounds.first);
    hi[0] = std::log(config.constant_bounds.second);
    if (dim == 2) {
        lo[1] = std::log(config.length_scale_bounds.first);
        hi[1] = std::log(config.length_scale_bounds.second);
    }

    Eigen::VectorXd start(dim);
    start[0] = std::log(config.constant_value);
    if (dim == 2) start[1] = std::log(config.length_scale);

    Rng restart_rng(derive_seed(config.seed, "gp-restarts"));
    detail::NelderMeadResult best = detail::nelder_mead_max(objective, start, lo, hi);
    for (int r = 0; r < config.n_restarts; ++r) {
        Eigen::VectorXd random_start(dim);
        for (int i = 0; i < dim; ++i) {
            random_start[i] = lo[i] + restart_rng.uniform() * (hi[i] - lo[i]);
        }
        detail::NelderMeadResult candidate = detail::nelder_mead_max(objective, random_start, lo, hi);
        if (candidate.best_value > best.best_value) best = candidate;
    }
    if (!std::isfinite(best.best_value)) {
        throw NumericError("gp_fit: no hyperparameters produced a positive-definite kernel");
    }

    model.constant_value = std::exp(best.best_x[0]);
    model.length_scale = dim == 2 ? std::exp(best.best_x[1]) : config.length_scale;
    Eigen::MatrixXd k =
        detail::kernel_from_sqdist(sqdist, model.constant_value, model.length_scale, config.kernel);
    model.chol_lower = detail::cholesky_with_jitter(k, config.alpha, model.jitter);
    model.dual = model.chol_lower.transpose().triangularView<Eigen::Upper>().solve(
        model.chol_lower.triangularView<Eigen::Lower>().solve(model.train_y));
    return model;
}

// Posterior mean and variance at the query rows, denormalized. Variance is
// the latent-function variance, clipped at zero from below.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gp_predict(const GPModel& model,
                                                              const Eigen::MatrixXd& x) {
    if (x.cols() != model.train_x.cols()) {
        throw ShapeError("gp_predict: expected " + std::to_string(model.train_x.cols()) +
                         " input dimensions, got " + std::to_string(x.cols()));
    }
    const Eigen::MatrixXd sqdist = detail::squared_distances(model.train_x, x);
    const Eigen::MatrixXd k_star =
        detail::kernel_from_sqdist(sqdist, model.constant_value, model.length_scale, model.kernel);

    Eigen::VectorXd mean = k_star.transpose() * model.dual;
    Eigen::MatrixXd v = model.chol_lower.triangularView<Eigen::Lower>().solve(k_star);
    Eigen::VectorXd variance =
        (model.constant_value - v.colwise().squaredNorm().transpose().array()).cwiseMax(0.0);

    mean = (mean.array() * model.target_std + model.target_mean).matrix();
    variance *= model.target_std * model.target_std;
    return {std::move(mean), std::move(variance)};
}

// Log marginal likelihood of the model's (normalized) targets under
// hyperparameters (c, ell); the fit maximizes exactly this quantity.
inline double gp_log_marginal_likelihood(const GPModel& model, double c, double ell) {
    if (c < model.constant_bounds.first || c > model.constant_bounds.second) {
        throw DomainError("gp_log_marginal_likelihood: amplitude outside configured bounds");
    }
    if (model.kernel == GpKernel::ConstantTimesRbf &&
        (ell < model.length_scale_bounds.first || ell > model.length_scale_bounds.second)) {
        throw DomainError("gp_log_marginal_likelihood: length scale outside configured bounds");
    }
    const Eigen::MatrixXd sqdist = detail::squared_distances(model.train_x, model.train_x);
    const Eigen::MatrixXd k = detail::kernel_from_sqdist(sqdist, c, ell, model.kernel);
    double jitter = 0.0;
    const Eigen::MatrixXd chol = detail::cholesky_with_jitter(k, model.alpha, jitter);
    const Eigen::VectorXd dual = chol.transpose().triangularView<Eigen::Upper>().solve(
        chol.triangularView<Eigen::Lower>().solve(model.train_y));
    return detail::lml_from_factor(chol, model.train_y, dual);
}

}  // namespace frugal
