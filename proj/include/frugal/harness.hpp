#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <initializer_list>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "frugal/acquisition.hpp"
#include "frugal/costs.hpp"
#include "frugal/data.hpp"
#include "frugal/errors.hpp"
#include "frugal/forest.hpp"
#include "frugal/loop.hpp"
#include "frugal/rng.hpp"

namespace frugal {

// A run specification with a human-readable label used in artifact filenames.
struct LabeledRun {
    std::string label;
    RunConfig config;
};

struct ExperimentConfig {
    std::string dataset_path;
    std::vector<LabeledRun> runs;
    std::vector<std::uint64_t> seeds;
    std::string output_dir = "out";
};

inline std::string measure_name(Measure measure) {
    switch (measure) {
        case Measure::LeastCertain: return "least_certain";
        case Measure::Margin: return "margin";
        case Measure::MarginStar: return "margin_star";
        case Measure::Entropy: return "entropy";
    }
    throw StateError("unhandled measure");
}

inline Measure parse_measure(const std::string& name) {
    if (name == "least_certain") return Measure::LeastCertain;
    if (name == "margin") return Measure::Margin;
    if (name == "margin_star") return Measure::MarginStar;
    if (name == "entropy") return Measure::Entropy;
    throw ConfigError("unknown measure '" + name +
                      "' (expected least_certain, margin, margin_star, or entropy)");
}

inline std::string cost_mode_name(RunCostMode mode) {
    switch (mode) {
        case RunCostMode::None: return "none";
        case RunCostMode::Known: return "known";
        case RunCostMode::Learned: return "learned";
        case RunCostMode::Uniform: return "uniform";
    }
    throw StateError("unhandled cost mode");
}

inline RunCostMode parse_cost_mode(const std::string& name) {
    if (name == "none") return RunCostMode::None;
    if (name == "known") return RunCostMode::Known;
    if (name == "learned") return RunCostMode::Learned;
    if (name == "uniform") return RunCostMode::Uniform;
    throw ConfigError("unknown cost_mode '" + name + "' (expected none, known, learned, or uniform)");
}

namespace detail {

using nlohmann::json;

inline void check_keys(const json& obj, const std::string& where,
                       std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

inline const json* find_field(const json& obj, const char* name) {
    auto it = obj.find(name);
    return it == obj.end() ? nullptr : &*it;
}

inline double take_real(const json& obj, const char* name, const std::string& where, double current) {
    const json* v = find_field(obj, name);
    if (!v) return current;
    if (!v->is_number()) throw ConfigError(std::string(name) + " in " + where + " must be a number");
    return v->get<double>();
}

inline int take_int(const json& obj, const char* name, const std::string& where, int current) {
    const json* v = find_field(obj, name);
    if (!v) return current;
    if (!v->is_number_integer()) throw ConfigError(std::string(name) + " in " + where + " must be an integer");
    return v->get<int>();
}

inline bool take_bool(const json& obj, const char* name, const std::string& where, bool current) {
    const json* v = find_field(obj, name);
    if (!v) return current;
    if (!v->is_boolean()) throw ConfigError(std::string(name) + " in " + where + " must be a boolean");
    return v->get<bool>();
}

inline std::string take_string(const json& obj, const char* name, const std::string& where,
                               std::string current) {
    const json* v = find_field(obj, name);
    if (!v) return current;
    if (!v->is_string()) throw ConfigError(std::string(name) + " in " + where + " must be a string");
    return v->get<std::string>();
}

inline Eigen::Vector2d parse_vec2(const json& v, const char* name, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(std::string(name) + " in " + where + " must be an array of two numbers");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

inline std::pair<double, double> take_bounds(const json& obj, const char* name, const std::string& where,
                                             std::pair<double, double> current) {
    const json* v = find_field(obj, name);
    if (!v) return current;
    const Eigen::Vector2d b = parse_vec2(*v, name, where);
    return {b[0], b[1]};
}

inline SelectionPolicy parse_policy(const json& obj, const std::string& where, SelectionPolicy policy) {
    check_keys(obj, where, {"epsilon_greedy", "epsilon_frugal", "cost_aware"});
    policy.epsilon_greedy = take_real(obj, "epsilon_greedy", where, policy.epsilon_greedy);
    policy.epsilon_frugal = take_real(obj, "epsilon_frugal", where, policy.epsilon_frugal);
    policy.cost_aware = take_bool(obj, "cost_aware", where, policy.cost_aware);
    return policy;
}

inline ForestConfig parse_forest(const json& obj, const std::string& where, ForestConfig forest) {
    check_keys(obj, where, {"n_trees", "max_features", "max_depth", "min_samples_split"});
    forest.n_trees = take_int(obj, "n_trees", where, forest.n_trees);
    forest.max_features = take_int(obj, "max_features", where, forest.max_features);
    forest.min_samples_split = take_int(obj, "min_samples_split", where, forest.min_samples_split);
    if (const json* v = find_field(obj, "max_depth")) {
        if (v->is_null()) {
            forest.max_depth.reset();
        } else if (v->is_number_integer()) {
            forest.max_depth = v->get<int>();
        } else {
            throw ConfigError("max_depth in " + where + " must be an integer or null");
        }
    }
    return forest;
}

inline GPConfig parse_gp(const json& obj, const std::string& where, GPConfig gp) {
    check_keys(obj, where,
               {"constant_value", "constant_bounds", "length_scale", "length_scale_bounds", "alpha",
                "n_restarts", "normalize_targets", "kernel"});
    gp.constant_value = take_real(obj, "constant_value", where, gp.constant_value);
    gp.constant_bounds = take_bounds(obj, "constant_bounds", where, gp.constant_bounds);
    gp.length_scale = take_real(obj, "length_scale", where, gp.length_scale);
    gp.length_scale_bounds = take_bounds(obj, "length_scale_bounds", where, gp.length_scale_bounds);
    gp.alpha = take_real(obj, "alpha", where, gp.alpha);
    gp.n_restarts = take_int(obj, "n_restarts", where, gp.n_restarts);
    gp.normalize_targets = take_bool(obj, "normalize_targets", where, gp.normalize_targets);
    const std::string kernel = take_string(obj, "kernel", where, "constant_times_rbf");
    if (kernel == "constant_times_rbf") {
        gp.kernel = GpKernel::ConstantTimesRbf;
    } else if (kernel == "constant_only") {
        gp.kernel = GpKernel::ConstantOnly;
    } else {
        throw ConfigError("unknown kernel '" + kernel + "' in " + where +
                          " (expected constant_times_rbf or constant_only)");
    }
    return gp;
}

inline CostFieldParams parse_cost_field(const json& obj, const std::string& where, CostFieldParams field) {
    check_keys(obj, where,
               {"c_min", "c_max", "center", "sigma", "offset_direction", "offset_magnitude", "basin_label"});
    field.c_min = take_real(obj, "c_min", where, field.c_min);
    field.c_max = take_real(obj, "c_max", where, field.c_max);
    field.offset_magnitude = take_real(obj, "offset_magnitude", where, field.offset_magnitude);
    field.basin_label = take_int(obj, "basin_label", where, field.basin_label);
    if (const json* v = find_field(obj, "center")) {
        if (v->is_null()) {
            field.center.reset();
        } else {
            field.center = parse_vec2(*v, "center", where);
        }
    }
    if (const json* v = find_field(obj, "sigma")) {
        if (v->is_null()) {
            field.sigma.reset();
        } else if (v->is_number()) {
            field.sigma = v->get<double>();
        } else {
            throw ConfigError("sigma in " + where + " must be a number or null");
        }
    }
    if (const json* v = find_field(obj, "offset_direction")) {
        field.offset_direction = parse_vec2(*v, "offset_direction", where);
    }
    return field;
}

inline LabeledRun parse_run_spec(const json& obj) {
    if (!obj.is_object()) throw ConfigError("each entry in runs must be an object");
    const json* label = find_field(obj, "label");
    if (!label || !label->is_string()) throw ConfigError("every run needs a string label");
    LabeledRun run;
    run.label = label->get<std::string>();
    if (run.label.empty() ||
        run.label.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") != std::string::npos) {
        throw ConfigError("run label '" + run.label + "' must match [A-Za-z0-9_.-]+");
    }
    const std::string where = "run '" + run.label + "'";
    check_keys(obj, where,
               {"label", "measure", "cost_mode", "initial_fraction", "iterations", "queries_per_iteration",
                "policy", "forest", "gp", "cost_field", "accuracy_on_unlabeled"});
    RunConfig& config = run.config;
    config.measure = parse_measure(take_string(obj, "measure", where, measure_name(config.measure)));
    config.cost_mode = parse_cost_mode(take_string(obj, "cost_mode", where, cost_mode_name(config.cost_mode)));
    config.initial_fraction = take_real(obj, "initial_fraction", where, config.initial_fraction);
    config.iterations = take_int(obj, "iterations", where, config.iterations);
    config.queries_per_iteration = take_int(obj, "queries_per_iteration", where, config.queries_per_iteration);
    config.accuracy_on_unlabeled = take_bool(obj, "accuracy_on_unlabeled", where, config.accuracy_on_unlabeled);
    if (const json* v = find_field(obj, "policy")) config.policy = parse_policy(*v, where + ".policy", config.policy);
    if (const json* v = find_field(obj, "forest")) config.forest = parse_forest(*v, where + ".forest", config.forest);
    if (const json* v = find_field(obj, "gp")) config.gp = parse_gp(*v, where + ".gp", config.gp);
    if (const json* v = find_field(obj, "cost_field")) {
        config.cost_field = parse_cost_field(*v, where + ".cost_field", config.cost_field);
    }
    return run;
}

}  // namespace detail

// Parse an experiment description; relative dataset paths resolve against base_dir.
inline ExperimentConfig parse_experiment(const nlohmann::json& root, const std::filesystem::path& base_dir) {
    if (!root.is_object()) throw ConfigError("experiment config must be a JSON object");
    detail::check_keys(root, "experiment config", {"dataset", "seeds", "runs", "output_dir"});

    ExperimentConfig experiment;
    const nlohmann::json* dataset = detail::find_field(root, "dataset");
    if (!dataset || !dataset->is_string()) throw ConfigError("experiment config needs a string 'dataset' path");
    std::filesystem::path path = dataset->get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    experiment.dataset_path = path.lexically_normal().string();

    const nlohmann::json* seeds = detail::find_field(root, "seeds");
    if (!seeds || !seeds->is_array() || seeds->empty()) {
        throw ConfigError("experiment config needs a non-empty 'seeds' array");
    }
    for (const auto& v : *seeds) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
            throw ConfigError("seeds must be non-negative integers");
        }
        experiment.seeds.push_back(v.get<std::uint64_t>());
    }

    const nlohmann::json* runs = detail::find_field(root, "runs");
    if (!runs || !runs->is_array() || runs->empty()) {
        throw ConfigError("experiment config needs a non-empty 'runs' array");
    }
    for (const auto& spec : *runs) {
        LabeledRun run = detail::parse_run_spec(spec);
        for (const LabeledRun& existing : experiment.runs) {
            if (existing.label == run.label) throw ConfigError("duplicate run label '" + run.label + "'");
        }
        experiment.runs.push_back(std::move(run));
    }

    experiment.output_dir = detail::take_string(root, "output_dir", "experiment config", experiment.output_dir);
    return experiment;
}

inline ExperimentConfig load_experiment(const std::string& config_path) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + config_path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config file " + config_path + ": " + e.what());
    }
    return parse_experiment(root, std::filesystem::path(config_path).parent_path());
}

inline const LabeledRun& find_run(const ExperimentConfig& experiment, const std::string& label) {
    for (const LabeledRun& run : experiment.runs) {
        if (run.label == label) return run;
    }
    throw ConfigError("no run labeled '" + label + "' in config");
}

// Load, standardize, and project the dataset; costs are left to each run.
inline Dataset prepare_dataset(const std::string& dataset_path) {
    return pca_project(load_wdbc(dataset_path));
}

namespace detail {

// All artifact floats use 9 significant digits so reruns are byte-identical.
inline std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : path_(path.string()), out_(path, std::ios::binary) {
        if (!out_) throw IoError("cannot open " + path_ + " for writing");
    }

    void line(const std::string& text) {
        out_ << text << '\n';
        if (!out_) throw IoError("write failed on " + path_);
    }

private:
    std::string path_;
    std::ofstream out_;
};

inline void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

inline std::string runrecord_name(const std::string& label, std::uint64_t seed) {
    return "runrecord_" + label + "_seed" + std::to_string(seed) + ".csv";
}

inline void write_runrecord(const std::filesystem::path& path, const RunRecord& record) {
    CsvWriter csv(path);
    csv.line("iteration,labeled_count,accuracy,cumulative_cost,queried_ids");
    for (const IterationRow& row : record.rows) {
        std::string joined;
        for (std::size_t i = 0; i < row.queried_ids.size(); ++i) {
            if (i > 0) joined += ';';
            joined += std::to_string(row.queried_ids[i]);
        }
        csv.line(std::to_string(row.iteration) + ',' + std::to_string(row.labeled_count) + ',' +
                 format_real(row.accuracy) + ',' + format_real(row.cumulative_cost) + ',' + joined);
    }
}

inline void write_selected_points(const std::filesystem::path& path, const RunRecord& record,
                                  const Dataset& dataset) {
    CsvWriter csv(path);
    csv.line("iteration,id,pc1,pc2,label,true_cost");
    for (const IterationRow& row : record.rows) {
        for (std::size_t i = 0; i < row.queried_ids.size(); ++i) {
            const Sample& s = dataset.samples[row.queried_ids[i]];
            csv.line(std::to_string(row.iteration) + ',' + std::to_string(s.id) + ',' +
                     format_real(s.pca2[0]) + ',' + format_real(s.pca2[1]) + ',' + std::to_string(s.label) +
                     ',' + format_real(row.query_costs[i]));
        }
    }
}

// Per-sample max class probability: the color channel of an uncertainty map.
inline void write_certainty_map(const std::filesystem::path& path, const ForestModel& model,
                                const Dataset& dataset) {
    CsvWriter csv(path);
    csv.line("id,pc1,pc2,max_probability");
    for (const Sample& s : dataset.samples) {
        const ClassProbabilities p = forest_predict_proba(model, s.features);
        const double top = *std::max_element(p.probs.begin(), p.probs.end());
        csv.line(std::to_string(s.id) + ',' + format_real(s.pca2[0]) + ',' + format_real(s.pca2[1]) + ',' +
                 format_real(top));
    }
}

inline void write_aggregate(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
    CsvWriter csv(path);
    csv.line("iteration,mean_accuracy,std_accuracy,mean_cumcost,std_cumcost");
    const std::size_t rows = records.front().rows.size();
    const double n = static_cast<double>(records.size());
    for (std::size_t r = 0; r < rows; ++r) {
        double acc_mean = 0.0, cost_mean = 0.0;
        for (const RunRecord& record : records) {
            acc_mean += record.rows[r].accuracy;
            cost_mean += record.rows[r].cumulative_cost;
        }
        acc_mean /= n;
        cost_mean /= n;
        double acc_var = 0.0, cost_var = 0.0;
        for (const RunRecord& record : records) {
            acc_var += (record.rows[r].accuracy - acc_mean) * (record.rows[r].accuracy - acc_mean);
            cost_var += (record.rows[r].cumulative_cost - cost_mean) * (record.rows[r].cumulative_cost - cost_mean);
        }
        csv.line(std::to_string(records.front().rows[r].iteration) + ',' + format_real(acc_mean) + ',' +
                 format_real(std::sqrt(acc_var / n)) + ',' + format_real(cost_mean) + ',' +
                 format_real(std::sqrt(cost_var / n)));
    }
}

// Rebuild the pool as it stood after the recorded queries (the record is the
// authority; pool reconstruction is deterministic given the run seed).
inline Pool replay_pool(const RunRecord& record, const Dataset& dataset) {
    Rng pool_rng(derive_seed(record.seed, "pool-init"));
    Pool pool = init_pool(dataset, record.config.initial_fraction, pool_rng);
    for (const IterationRow& row : record.rows) {
        if (!row.queried_ids.empty()) pool = move_to_labeled(std::move(pool), row.queried_ids);
    }
    return pool;
}

inline ForestModel forest_at_iteration(const RunConfig& config, const Dataset& dataset,
                                       const std::vector<int>& labeled, int iteration) {
    ForestConfig forest_config = config.forest;
    forest_config.seed = derive_seed(config.seed, "forest", static_cast<std::uint64_t>(iteration));
    return fit_on_labeled(dataset, labeled, forest_config);
}

// The dataset exactly as run() sees it: cost field attached for cost modes.
inline Dataset dataset_for_run(const RunConfig& config, const Dataset& base) {
    if (config.cost_mode == RunCostMode::None || base.has_costs) return base;
    return build_cost_field(base, config.cost_field);
}

}  // namespace detail

// Execute one labeled run and write its runrecord, selected-points, and
// before/after certainty-map CSVs into out_dir.
inline void cmd_run(const ExperimentConfig& experiment, const std::string& label, std::uint64_t seed,
                    const std::string& out_dir) {
    const LabeledRun& spec = find_run(experiment, label);
    RunConfig config = spec.config;
    config.seed = seed;

    const Dataset base = prepare_dataset(experiment.dataset_path);
    validate_run_config(config, base);
    detail::ensure_dir(out_dir);

    const Dataset dataset = detail::dataset_for_run(config, base);
    const RunRecord record = run(config, dataset);

    const std::filesystem::path dir(out_dir);
    const std::string suffix = label + "_seed" + std::to_string(seed);
    detail::write_runrecord(dir / detail::runrecord_name(label, seed), record);
    detail::write_selected_points(dir / ("selected_points_" + suffix + ".csv"), record, dataset);

    Rng pool_rng(derive_seed(seed, "pool-init"));
    const Pool initial_pool = init_pool(dataset, config.initial_fraction, pool_rng);
    const ForestModel initial_model = detail::forest_at_iteration(config, dataset, initial_pool.labeled, 0);
    detail::write_certainty_map(dir / ("certainty_initial_" + suffix + ".csv"), initial_model, dataset);

    const Pool final_pool = detail::replay_pool(record, dataset);
    const ForestModel final_model =
        detail::forest_at_iteration(config, dataset, final_pool.labeled, config.iterations);
    detail::write_certainty_map(dir / ("certainty_final_" + suffix + ".csv"), final_model, dataset);

    std::cerr << "[run] " << label << " seed " << seed << ": final accuracy "
              << detail::format_real(record.rows.back().accuracy) << ", cumulative cost "
              << detail::format_real(record.rows.back().cumulative_cost) << "\n";
}

// Execute every (label, seed) pair, write per-run runrecords, then one
// aggregate learning curve per label. Runs are independent and execute on a
// small worker pool; outputs depend only on (config, dataset).
inline void cmd_sweep(const ExperimentConfig& experiment, const std::string& out_dir) {
    const Dataset base = prepare_dataset(experiment.dataset_path);
    for (const LabeledRun& spec : experiment.runs) {
        RunConfig config = spec.config;
        config.seed = experiment.seeds.front();
        validate_run_config(config, base);
    }
    detail::ensure_dir(out_dir);

    struct Job {
        const LabeledRun* spec;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const LabeledRun& spec : experiment.runs) {
        for (std::uint64_t seed : experiment.seeds) jobs.push_back({&spec, seed});
    }

    std::vector<RunRecord> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            RunConfig config = jobs[i].spec->config;
            config.seed = jobs[i].seed;
            results[i] = run(config, detail::dataset_for_run(config, base));
            std::lock_guard<std::mutex> lock(log_mutex);
            std::cerr << "[sweep] " << jobs[i].spec->label << " seed " << jobs[i].seed << ": final accuracy "
                      << detail::format_real(results[i].rows.back().accuracy) << "\n";
        }
    };
    const std::size_t n_workers =
        std::min<std::size_t>(jobs.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < n_workers; ++w) futures.push_back(std::async(std::launch::async, worker));
    for (auto& f : futures) f.get();

    const std::filesystem::path dir(out_dir);
    std::size_t index = 0;
    for (const LabeledRun& spec : experiment.runs) {
        std::vector<RunRecord> per_label;
        for (std::uint64_t seed : experiment.seeds) {
            detail::write_runrecord(dir / detail::runrecord_name(spec.label, seed), results[index]);
            per_label.push_back(std::move(results[index]));
            ++index;
        }
        detail::write_aggregate(dir / ("aggregate_" + spec.label + ".csv"), per_label);
    }
}

// Snapshot the pool after `snapshot` iterations of the labeled run and emit
// cost-unaware rankings under entropy and margin-star, one CSV per measure,
// with the true cost of each pool member alongside (rank 1 = queried first).
inline void cmd_rank_cost(const ExperimentConfig& experiment, const std::string& label, std::uint64_t seed,
                          int snapshot, const std::string& out_dir) {
    const LabeledRun& spec = find_run(experiment, label);
    if (snapshot < 0 || snapshot > spec.config.iterations) {
        throw ConfigError("snapshot iteration must lie in [0, " + std::to_string(spec.config.iterations) + "]");
    }
    RunConfig config = spec.config;
    config.seed = seed;
    config.iterations = snapshot;

    const Dataset base = prepare_dataset(experiment.dataset_path);
    validate_run_config(config, base);
    detail::ensure_dir(out_dir);

    // The rank-vs-cost view always needs true costs, whatever the run's mode.
    const Dataset dataset = base.has_costs ? base : build_cost_field(base, config.cost_field);
    const RunRecord record = run(config, dataset);
    const Pool pool = detail::replay_pool(record, dataset);
    const ForestModel model = detail::forest_at_iteration(config, dataset, pool.labeled, snapshot);

    const std::filesystem::path dir(out_dir);
    const std::string suffix = label + "_seed" + std::to_string(seed) + "_iter" + std::to_string(snapshot);
    for (const Measure measure : {Measure::Entropy, Measure::MarginStar}) {
        const Ranking ranking = rank_pool(model, pool, dataset, measure);
        detail::CsvWriter csv(dir / ("rankcost_" + measure_name(measure) + "_" + suffix + ".csv"));
        csv.line("id,rank,uncertainty_score,true_cost");
        for (std::size_t r = 0; r < ranking.entries.size(); ++r) {
            const RankedEntry& entry = ranking.entries[r];
            csv.line(std::to_string(entry.id) + ',' + std::to_string(r + 1) + ',' +
                     detail::format_real(entry.uncertainty) + ',' +
                     detail::format_real(dataset.samples[entry.id].true_cost));
        }
    }
    std::cerr << "[rank-cost] " << label << " seed " << seed << " iteration " << snapshot << ": "
              << pool.unlabeled.size() << " pool rows\n";
}

// Emit the 2-D projection scatter and the cost field over it. The field uses
// the first run's cost parameters (they are per-run configuration).
inline void cmd_pca_dump(const ExperimentConfig& experiment, const std::string& out_dir) {
    const Dataset base = prepare_dataset(experiment.dataset_path);
    const CostFieldParams params =
        experiment.runs.empty() ? CostFieldParams{} : experiment.runs.front().config.cost_field;
    const Dataset dataset = build_cost_field(base, params);
    detail::ensure_dir(out_dir);

    const std::filesystem::path dir(out_dir);
    {
        detail::CsvWriter csv(dir / "pca_scatter.csv");
        csv.line("id,pc1,pc2,label");
        for (const Sample& s : dataset.samples) {
            csv.line(std::to_string(s.id) + ',' + detail::format_real(s.pca2[0]) + ',' +
                     detail::format_real(s.pca2[1]) + ',' + std::to_string(s.label));
        }
    }
    {
        detail::CsvWriter csv(dir / "cost_field.csv");
        csv.line("id,pc1,pc2,true_cost");
        for (const Sample& s : dataset.samples) {
            csv.line(std::to_string(s.id) + ',' + detail::format_real(s.pca2[0]) + ',' +
                     detail::format_real(s.pca2[1]) + ',' + detail::format_real(s.true_cost));
        }
    }
    std::cerr << "[pca-dump] " << dataset.n() << " samples\n";
}

}  // namespace frugal
