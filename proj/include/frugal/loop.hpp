#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "frugal/acquisition.hpp"
#include "frugal/costs.hpp"
#include "frugal/data.hpp"
#include "frugal/errors.hpp"
#include "frugal/forest.hpp"
#include "frugal/gp.hpp"
#include "frugal/rng.hpp"

namespace frugal {

enum class RunCostMode { None, Known, Learned, Uniform };

struct RunConfig {
    double initial_fraction = 0.05;
    int iterations = 50;
    int queries_per_iteration = 2;
    Measure measure = Measure::Entropy;
    SelectionPolicy policy;
    RunCostMode cost_mode = RunCostMode::None;
    ForestConfig forest;
    GPConfig gp;
    CostFieldParams cost_field;
    std::uint64_t seed = 0;
    bool accuracy_on_unlabeled = false;  // evaluate on the remaining pool instead of all data
};

struct IterationRow {
    int iteration = 0;
    std::vector<int> queried_ids;     // in selection order
    std::vector<double> query_costs;  // true costs of the queried ids
    double cumulative_cost = 0.0;
    double accuracy = 0.0;
    int labeled_count = 0;
};

// One seeded run: T+1 rows, row 0 being the pre-loop state.
struct RunRecord {
    std::vector<IterationRow> rows;
    RunConfig config;
    std::uint64_t seed = 0;
};

// The labeling authority: returns the stored true label, always.
struct Oracle {
    const Dataset* dataset = nullptr;
    int label_of(int id) const { return dataset->samples[id].label; }
};

inline void validate_run_config(const RunConfig& config, const Dataset& dataset) {
    validate_policy(config.policy);
    validate_gp_config(config.gp);
    if (config.iterations < 0) throw ConfigError("iterations must be >= 0");
    if (config.queries_per_iteration < 1) throw ConfigError("queries_per_iteration must be >= 1");
    if (!(config.initial_fraction > 0.0 && config.initial_fraction < 1.0)) {
        throw ConfigError("initial_fraction must lie in (0, 1)");
    }
    if (config.cost_mode == RunCostMode::None) {
        if (config.policy.epsilon_frugal > 0.0) {
            throw ConfigError("epsilon_frugal > 0 requires a cost mode");
        }
        if (config.policy.cost_aware) {
            throw ConfigError("cost-aware ranking requires a cost mode");
        }
    }
    if (config.policy.cost_aware && (config.measure == Measure::Margin || config.measure == Measure::MarginStar)) {
        throw ConfigError("cost weighting is defined only for least-certain and entropy measures");
    }
    const long long t0 = std::llround(config.initial_fraction * dataset.n());
    const long long total = t0 + static_cast<long long>(config.iterations) * config.queries_per_iteration;
    if (total > dataset.n()) {
        throw ConfigError("pool too small: " + std::to_string(total) + " labels requested from " +
                          std::to_string(dataset.n()) + " samples");
    }
}

namespace detail {

inline ForestModel fit_on_labeled(const Dataset& dataset, const std::vector<int>& labeled,
                                  ForestConfig forest_config) {
    Eigen::MatrixXd x(labeled.size(), dataset.dim());
    std::vector<int> y(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        const Sample& s = dataset.samples[labeled[i]];
        x.row(i) = s.features.transpose();
        y[i] = s.label;
    }
    return forest_fit(x, y, forest_config);
}

inline double evaluate_accuracy(const ForestModel& model, const Dataset& dataset, const Pool& pool,
                                bool unlabeled_only) {
    if (!unlabeled_only) return forest_accuracy(model, dataset);
    if (pool.unlabeled.empty()) return 1.0;
    int correct = 0;
    for (int id : pool.unlabeled) {
        if (forest_predict(model, dataset.samples[id].features) == dataset.samples[id].label) ++correct;
    }
    return static_cast<double>(correct) / pool.unlabeled.size();
}

}  // namespace detail

// Full active-learning run: fit on the labeled set, rank the pool, select
// queries under the policy, label them, grow the pool, record metrics.
// Learned mode ranks on predicted costs but bills the true ones.
inline RunRecord run(const RunConfig& config, const Dataset& input) {
    validate_run_config(config, input);
    if (config.cost_mode != RunCostMode::None && !input.has_pca) {
        throw StateError("cost modes need pca2 coordinates; run pca_project first");
    }

    Dataset dataset = input;
    if (config.cost_mode != RunCostMode::None && !dataset.has_costs) {
        dataset = build_cost_field(std::move(dataset), config.cost_field);
    }
    auto true_cost_of = [&](int id) { return dataset.has_costs ? dataset.samples[id].true_cost : 1.0; };

    Rng pool_rng(derive_seed(config.seed, "pool-init"));
    Pool pool = init_pool(dataset, config.initial_fraction, pool_rng);
    const Oracle oracle{&dataset};

    CostProvider provider;
    switch (config.cost_mode) {
        case RunCostMode::None: break;
        case RunCostMode::Known: provider.mode = CostMode::Known; break;
        case RunCostMode::Learned: provider.mode = CostMode::Learned; break;
        case RunCostMode::Uniform: provider.mode = CostMode::Uniform; break;
    }

    ForestConfig forest_config = config.forest;
    forest_config.seed = derive_seed(config.seed, "forest", 0);
    ForestModel model = detail::fit_on_labeled(dataset, pool.labeled, forest_config);

    RunRecord record;
    record.config = config;
    record.seed = config.seed;
    record.rows.reserve(config.iterations + 1);

    IterationRow initial;
    initial.iteration = 0;
    initial.accuracy = detail::evaluate_accuracy(model, dataset, pool, config.accuracy_on_unlabeled);
    initial.labeled_count = static_cast<int>(pool.labeled.size());
    record.rows.push_back(std::move(initial));

    double cumulative_cost = 0.0;
    for (int n = 1; n <= config.iterations; ++n) {
        if (config.cost_mode == RunCostMode::Learned) {
            GPConfig gp_config = config.gp;
            gp_config.seed = derive_seed(config.seed, "gp", static_cast<std::uint64_t>(n));
            provider = refit_cost_model(std::move(provider), pool, dataset, gp_config);
        }

        const Ranking ranking_pure = rank_pool(model, pool, dataset, config.measure);
        Ranking ranking_costed;
        if (config.policy.cost_aware) {
            const std::vector<double> costs = get_costs(provider, pool.unlabeled, dataset);
            ranking_costed = rank_pool(model, pool, dataset, config.measure, costs);
        } else {
            ranking_costed = ranking_pure;
        }

        Rng select_rng(derive_seed(config.seed, "select", static_cast<std::uint64_t>(n)));
        const std::vector<int> queried =
            select_queries(ranking_costed, ranking_pure, config.queries_per_iteration, config.policy, select_rng);

        IterationRow row;
        row.iteration = n;
        row.queried_ids = queried;
        for (int id : queried) {
            (void)oracle.label_of(id);  // querying; labels live in the dataset
            row.query_costs.push_back(true_cost_of(id));
            cumulative_cost += row.query_costs.back();
        }
        row.cumulative_cost = cumulative_cost;

        pool = move_to_labeled(std::move(pool), queried);
        forest_config.seed = derive_seed(config.seed, "forest", static_cast<std::uint64_t>(n));
        model = detail::fit_on_labeled(dataset, pool.labeled, forest_config);

        row.accuracy = detail::evaluate_accuracy(model, dataset, pool, config.accuracy_on_unlabeled);
        row.labeled_count = static_cast<int>(pool.labeled.size());
        record.rows.push_back(std::move(row));
    }
    return record;
}

// Random sampling baseline: every pick is uniform over the remaining pool.
inline RunRecord run_random_baseline(RunConfig config, const Dataset& dataset) {
    config.policy.epsilon_greedy = 1.0;
    return run(config, dataset);
}

}  // namespace frugal
