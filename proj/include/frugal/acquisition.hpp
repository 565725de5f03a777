#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "frugal/data.hpp"
#include "frugal/errors.hpp"
#include "frugal/forest.hpp"
#include "frugal/rng.hpp"

namespace frugal {

enum class Measure { LeastCertain, Margin, MarginStar, Entropy };

struct SelectionPolicy {
    double epsilon_greedy = 0.0;  // probability of a uniform-random pick
    double epsilon_frugal = 0.0;  // probability of a cost-ignoring ("costly") pick
    bool cost_aware = false;      // divide uncertainty by cost when ranking
};

inline void validate_policy(const SelectionPolicy& policy) {
    if (policy.epsilon_greedy < 0.0 || policy.epsilon_greedy > 1.0) {
        throw ConfigError("epsilon_greedy must lie in [0, 1]");
    }
    if (policy.epsilon_frugal < 0.0 || policy.epsilon_frugal > 1.0) {
        throw ConfigError("epsilon_frugal must lie in [0, 1]");
    }
    if (policy.epsilon_frugal > 0.0 && !policy.cost_aware) {
        throw ConfigError("epsilon_frugal > 0 requires cost-aware ranking");
    }
}

struct RankedEntry {
    int id = 0;
    double uncertainty = 0.0;
    double cost = 1.0;  // 1 when the ranking ignores costs
    double selection_score = 0.0;
};

// Entries sorted descending by selection_score, ascending id on ties;
// position in `entries` is the rank (0 = selected first).
struct Ranking {
    std::vector<RankedEntry> entries;
};

// 1 - P(most likely label): zero when the model is certain.
inline double score_least_certain(const ClassProbabilities& p) {
    if (p.probs.empty()) throw ShapeError("score_least_certain: empty probability vector");
    return 1.0 - *std::max_element(p.probs.begin(), p.probs.end());
}

namespace detail {
inline std::pair<double, double> two_largest(const ClassProbabilities& p) {
    if (p.probs.size() < 2) throw ShapeError("margin measures need at least 2 classes");
    double first = -1.0;
    double second = -1.0;
    for (double v : p.probs) {
        if (v > first) {
            second = first;
            first = v;
        } else if (v > second) {
            second = v;
        }
    }
    return {first, second};
}
}  // namespace detail

// Negated gap between the two most likely labels; higher = more uncertain.
inline double score_margin(const ClassProbabilities& p) {
    auto [first, second] = detail::two_largest(p);
    return -(first - second);
}

// Absolute gap between the two most likely labels. Ranked descending like
// every other measure, so the most certain samples surface first.
inline double score_margin_star(const ClassProbabilities& p) {
    auto [first, second] = detail::two_largest(p);
    return std::abs(first - second);
}

// Shannon entropy (natural log) of the class distribution.
inline double score_entropy(const ClassProbabilities& p) {
    if (p.probs.empty()) throw ShapeError("score_entropy: empty probability vector");
    double h = 0.0;
    for (double v : p.probs) {
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

inline double score(Measure measure, const ClassProbabilities& p) {
    switch (measure) {
        case Measure::LeastCertain: return score_least_certain(p);
        case Measure::Margin: return score_margin(p);
        case Measure::MarginStar: return score_margin_star(p);
        case Measure::Entropy: return score_entropy(p);
    }
    throw ConfigError("unknown measure");
}

// Scores every unlabeled sample and sorts by selection score. When costs are
// given (aligned with pool.unlabeled) the score is uncertainty / cost; that
// weighting is defined only for LeastCertain and Entropy.
inline Ranking rank_pool(const ForestModel& model, const Pool& pool, const Dataset& dataset,
                         Measure measure, const std::optional<std::vector<double>>& costs = std::nullopt) {
    if (costs) {
        if (measure == Measure::Margin || measure == Measure::MarginStar) {
            throw ConfigError("cost weighting is defined only for least-certain and entropy measures");
        }
        if (costs->size() != pool.unlabeled.size()) {
            throw ShapeError("rank_pool: cost vector does not match the unlabeled pool");
        }
        for (double c : *costs) {
            if (!(c > 0.0)) throw DomainError("rank_pool: costs must be positive");
        }
    }

    Ranking ranking;
    ranking.entries.reserve(pool.unlabeled.size());
    for (std::size_t i = 0; i < pool.unlabeled.size(); ++i) {
        const int id = pool.unlabeled[i];
        RankedEntry entry;
        entry.id = id;
        entry.uncertainty = score(measure, forest_predict_proba(model, dataset.samples[id].features));
        entry.cost = costs ? (*costs)[i] : 1.0;
        entry.selection_score = costs ? entry.uncertainty / entry.cost : entry.uncertainty;
        ranking.entries.push_back(entry);
    }
    std::sort(ranking.entries.begin(), ranking.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.selection_score != b.selection_score) return a.selection_score > b.selection_score;
        return a.id < b.id;
    });
    return ranking;
}

// Draws t_n distinct ids, one at a time. Each pick explores uniformly with
// probability eps_g; otherwise, in cost-aware mode, takes the top of the
// cost-ignoring ranking with probability eps_f; otherwise exploits the
// active ranking. Picked ids are removed from both rankings.
inline std::vector<int> select_queries(const Ranking& ranking_costed, const Ranking& ranking_pure, int t_n,
                                       const SelectionPolicy& policy, Rng& rng) {
    validate_policy(policy);
    const std::size_t pool_size = ranking_pure.entries.size();
    if (ranking_costed.entries.size() != pool_size) {
        throw StateError("select_queries: rankings cover different pools");
    }
    if (t_n < 0 || static_cast<std::size_t>(t_n) > pool_size) {
        throw StateError("select_queries: requested more queries than the pool holds");
    }

    std::vector<int> remaining;  // ascending ids, for uniform exploration
    remaining.reserve(pool_size);
    for (const RankedEntry& e : ranking_pure.entries) remaining.push_back(e.id);
    std::sort(remaining.begin(), remaining.end());
    {
        std::vector<int> costed_ids;
        costed_ids.reserve(pool_size);
        for (const RankedEntry& e : ranking_costed.entries) costed_ids.push_back(e.id);
        std::sort(costed_ids.begin(), costed_ids.end());
        if (costed_ids != remaining) throw StateError("select_queries: rankings cover different id sets");
    }

    const Ranking& active = policy.cost_aware ? ranking_costed : ranking_pure;
    std::vector<int> picked;
    picked.reserve(t_n);

    auto top_remaining = [&](const Ranking& ranking) {
        for (const RankedEntry& e : ranking.entries) {
            if (std::binary_search(remaining.begin(), remaining.end(), e.id)) return e.id;
        }
        throw StateError("select_queries: ranking exhausted");
    };

    for (int q = 0; q < t_n; ++q) {
        const double u = rng.uniform();
        int id;
        if (u < policy.epsilon_greedy) {
            id = remaining[rng.uniform_index(remaining.size())];
        } else if (policy.cost_aware &&
                   u < policy.epsilon_greedy + policy.epsilon_frugal * (1.0 - policy.epsilon_greedy)) {
            id = top_remaining(ranking_pure);
        } else {
            id = top_remaining(active);
        }
        picked.push_back(id);
        remaining.erase(std::lower_bound(remaining.begin(), remaining.end(), id));
    }
    return picked;
}

}  // namespace frugal
