#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

#include "frugal/data.hpp"
#include "frugal/errors.hpp"
#include "frugal/gp.hpp"

namespace frugal {

constexpr double kLearnedCostFloor = 0.01;  // keeps learned costs usable as divisors

// Inverted Gaussian bump over the PCA plane: a low-cost basin of depth
// (c_max - c_min) sitting off-center of one class cluster, c_max elsewhere.
struct CostFieldParams {
    double c_min = 1.0;
    double c_max = 10.0;
    std::optional<Eigen::Vector2d> center;  // derived from the data when unset
    std::optional<double> sigma;            // derived when unset
    Eigen::Vector2d offset_direction{1.0, 0.0};
    double offset_magnitude = 1.0;
    int basin_label = 0;  // class whose cluster hosts the basin
};

struct ResolvedCostField {
    Eigen::Vector2d center;
    double sigma = 1.0;
    double c_min = 1.0;
    double c_max = 10.0;

    double cost_at(const Eigen::Vector2d& z) const {
        const double d2 = (z - center).squaredNorm();
        return c_max - (c_max - c_min) * std::exp(-d2 / (2.0 * sigma * sigma));
    }
};

// Fills in the derived defaults: basin center = basin-class PCA centroid
// shifted by offset_magnitude along offset_direction, sigma = half that
// cluster's RMS spread about its centroid.
inline ResolvedCostField resolve_cost_field(const Dataset& dataset, const CostFieldParams& params) {
    if (!(params.c_max > params.c_min && params.c_min > 0.0)) {
        throw ConfigError("cost field requires c_max > c_min > 0");
    }
    if (!dataset.has_pca) throw StateError("cost field requires pca2 coordinates; run pca_project first");

    ResolvedCostField field;
    field.c_min = params.c_min;
    field.c_max = params.c_max;

    if (!params.center || !params.sigma) {
        Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
        int count = 0;
        for (const Sample& s : dataset.samples) {
            if (s.label == params.basin_label) {
                centroid += s.pca2;
                ++count;
            }
        }
        if (count == 0) throw StateError("cost field: no samples carry the basin label");
        centroid /= static_cast<double>(count);

        if (params.center) {
            field.center = *params.center;
        } else {
            Eigen::Vector2d direction = params.offset_direction;
            const double norm = direction.norm();
            if (!(norm > 0.0)) throw ConfigError("cost field: offset_direction must be nonzero");
            direction /= norm;
            field.center = centroid + params.offset_magnitude * direction;
        }

        if (params.sigma) {
            field.sigma = *params.sigma;
        } else {
            double spread = 0.0;
            for (const Sample& s : dataset.samples) {
                if (s.label == params.basin_label) spread += (s.pca2 - centroid).squaredNorm();
            }
            field.sigma = 0.5 * std::sqrt(spread / count);
        }
    } else {
        field.center = *params.center;
        field.sigma = *params.sigma;
    }
    if (!(field.sigma > 0.0)) throw ConfigError("cost field: sigma must be positive");
    return field;
}

// Assigns every sample its true query cost from the field.
inline Dataset build_cost_field(Dataset dataset, const CostFieldParams& params) {
    const ResolvedCostField field = resolve_cost_field(dataset, params);
    for (Sample& s : dataset.samples) s.true_cost = field.cost_at(s.pca2);
    dataset.has_costs = true;
    return dataset;
}

enum class CostMode { Known, Learned, Uniform };

// Uniform interface over the three cost regimes the ranking stage can use.
struct CostProvider {
    CostMode mode = CostMode::Uniform;
    std::optional<GPModel> regressor;  // Learned mode only, refitted per iteration
};

// Refits the Learned-mode GP on (pca2, true cost) of the labeled set.
inline CostProvider refit_cost_model(CostProvider provider, const Pool& pool, const Dataset& dataset,
                                     const GPConfig& config) {
    if (provider.mode != CostMode::Learned) {
        throw StateError("refit_cost_model: provider is not in Learned mode");
    }
    if (pool.labeled.empty()) throw StateError("refit_cost_model: labeled set is empty");
    if (!dataset.has_pca) throw StateError("refit_cost_model: dataset has no pca2 coordinates");
    if (!dataset.has_costs) throw StateError("refit_cost_model: dataset has no true costs");

    Eigen::MatrixXd x(pool.labeled.size(), 2);
    Eigen::VectorXd y(pool.labeled.size());
    for (std::size_t i = 0; i < pool.labeled.size(); ++i) {
        const Sample& s = dataset.samples[pool.labeled[i]];
        x.row(i) = s.pca2.transpose();
        y[i] = s.true_cost;
    }
    provider.regressor = gp_fit(x, y, config);
    return provider;
}

// Per-id costs for ranking: true costs (Known), GP posterior means floored
// at kLearnedCostFloor (Learned), or 1.0 (Uniform).
inline std::vector<double> get_costs(const CostProvider& provider, const std::vector<int>& ids,
                                     const Dataset& dataset) {
    for (int id : ids) {
        if (id < 0 || id >= dataset.n()) throw StateError("get_costs: unknown id " + std::to_string(id));
    }
    std::vector<double> costs(ids.size(), 1.0);
    switch (provider.mode) {
        case CostMode::Uniform:
            break;
        case CostMode::Known:
            for (std::size_t i = 0; i < ids.size(); ++i) {
                const double c = dataset.samples[ids[i]].true_cost;
                if (!(c > 0.0)) {
                    throw StateError("get_costs: sample " + std::to_string(ids[i]) + " has no assigned cost");
                }
                costs[i] = c;
            }
            break;
        case CostMode::Learned: {
            if (!provider.regressor) throw StateError("get_costs: Learned provider has no fitted model");
            Eigen::MatrixXd x(ids.size(), 2);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                x.row(i) = dataset.samples[ids[i]].pca2.transpose();
            }
            const auto [mean, variance] = gp_predict(*provider.regressor, x);
            for (std::size_t i = 0; i < ids.size(); ++i) {
                costs[i] = std::max(mean[i], kLearnedCostFloor);
            }
            break;
        }
    }
    return costs;
}

}  // namespace frugal
