#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "frugal/errors.hpp"
#include "frugal/rng.hpp"

namespace frugal {

constexpr double kStdFloor = 1e-12;  // guards zero-variance columns

struct Sample {
    int id = 0;
    Eigen::VectorXd features;                          // standardized, dimension D
    int label = 0;                                     // 0 = benign, 1 = malignant
    Eigen::Vector2d pca2 = Eigen::Vector2d::Zero();    // leading two principal components
    double true_cost = 0.0;                            // > 0 once a cost field is applied
};

struct Dataset {
    std::vector<Sample> samples;
    Eigen::VectorXd feature_mean;  // standardization parameters recorded at load
    Eigen::VectorXd feature_std;
    bool has_pca = false;
    bool has_costs = false;

    int n() const { return static_cast<int>(samples.size()); }
    int dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().features.size()); }

    Eigen::MatrixXd feature_matrix() const {
        Eigen::MatrixXd m(n(), dim());
        for (int i = 0; i < n(); ++i) m.row(i) = samples[i].features.transpose();
        return m;
    }
};

// Labeled/unlabeled partition of sample ids; both sides kept sorted ascending.
struct Pool {
    std::vector<int> labeled;
    std::vector<int> unlabeled;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline bool parse_double(std::string_view s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out, std::chars_format::general);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

inline bool parse_long(std::string_view s, long long& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace detail

// Z-scores every feature column in place and records (mean, std). Sample
// standard deviation, floored at kStdFloor.
inline Dataset standardize(Dataset dataset) {
    const int n = dataset.n();
    const int d = dataset.dim();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (const Sample& s : dataset.samples) mean += s.features;
    mean /= static_cast<double>(n);

    Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
    for (const Sample& s : dataset.samples) var += (s.features - mean).cwiseAbs2();
    if (n > 1) var /= static_cast<double>(n - 1);
    Eigen::VectorXd std_dev = var.cwiseSqrt().cwiseMax(kStdFloor);

    for (Sample& s : dataset.samples) s.features = (s.features - mean).cwiseQuotient(std_dev);
    dataset.feature_mean = mean;
    dataset.feature_std = std_dev;
    return dataset;
}

// Reads a `id,diagnosis,f1..fD` CSV (D >= 2, diagnosis in {M,B}) and returns
// a standardized Dataset. A header row is skipped when its second field is
// neither numeric nor M/B. Sample ids are positional.
inline Dataset load_wdbc(const std::string& path) {
    std::ifstream file(path);
    if (!file.is_open()) throw IoError("cannot open dataset file: " + path);

    Dataset dataset;
    std::string line;
    int line_number = 0;
    int expected_fields = -1;
    while (std::getline(file, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        auto fields = detail::split_fields(line);
        if (line_number == 1 && fields.size() >= 2) {
            double probe = 0.0;
            std::string_view second = fields[1];
            if (second != "M" && second != "B" && !detail::parse_double(second, probe)) continue;
        }

        if (expected_fields < 0) {
            expected_fields = static_cast<int>(fields.size());
            if (expected_fields < 4) {
                throw SchemaError("line " + std::to_string(line_number) + ": expected id, diagnosis and at least 2 features, got " +
                                  std::to_string(expected_fields) + " fields");
            }
        } else if (static_cast<int>(fields.size()) != expected_fields) {
            throw SchemaError("line " + std::to_string(line_number) + ": expected " + std::to_string(expected_fields) +
                              " fields, got " + std::to_string(fields.size()));
        }

        long long raw_id = 0;
        if (!detail::parse_long(fields[0], raw_id)) {
            throw ParseError("line " + std::to_string(line_number) + ": bad id field '" + std::string(fields[0]) + "'");
        }
        int label;
        if (fields[1] == "M") {
            label = 1;
        } else if (fields[1] == "B") {
            label = 0;
        } else {
            throw ParseError("line " + std::to_string(line_number) + ": diagnosis must be M or B, got '" +
                             std::string(fields[1]) + "'");
        }

        Sample sample;
        sample.id = static_cast<int>(dataset.samples.size());
        sample.label = label;
        sample.features.resize(expected_fields - 2);
        for (int j = 2; j < expected_fields; ++j) {
            double v = 0.0;
            if (!detail::parse_double(fields[j], v)) {
                throw ParseError("line " + std::to_string(line_number) + ": bad feature value '" +
                                 std::string(fields[j]) + "'");
            }
            sample.features[j - 2] = v;
        }
        dataset.samples.push_back(std::move(sample));
    }
    if (dataset.samples.empty()) throw SchemaError("dataset file has no data rows: " + path);
    return standardize(std::move(dataset));
}

struct PrincipalAxes {
    Eigen::MatrixXd components;   // D x k, columns sorted by descending eigenvalue
    Eigen::VectorXd eigenvalues;  // k entries, descending
};

// Leading k eigenvectors of the sample covariance of `data` (rows = samples).
// Sign convention: each component's largest-magnitude entry is positive.
inline PrincipalAxes principal_axes(const Eigen::MatrixXd& data, int k) {
    const auto n = data.rows();
    Eigen::RowVectorXd mean = data.colwise().mean();
    Eigen::MatrixXd centered = data.rowwise() - mean;
    Eigen::MatrixXd covariance = centered.transpose() * centered;
    if (n > 1) covariance /= static_cast<double>(n - 1);
    if (!covariance.allFinite()) throw NumericError("covariance matrix has non-finite entries");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
    if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");

    const int d = static_cast<int>(data.cols());
    PrincipalAxes axes;
    axes.components.resize(d, k);
    axes.eigenvalues.resize(k);
    for (int j = 0; j < k; ++j) {
        // Eigen returns ascending eigenvalues; take from the back.
        Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - j);
        int max_idx = 0;
        v.cwiseAbs().maxCoeff(&max_idx);
        if (v[max_idx] < 0.0) v = -v;
        axes.components.col(j) = v;
        axes.eigenvalues[j] = solver.eigenvalues()[d - 1 - j];
    }
    return axes;
}

// Projects every sample onto the two leading principal components.
inline Dataset pca_project(Dataset dataset) {
    if (dataset.dim() < 2) throw ShapeError("pca_project needs at least 2 features");
    PrincipalAxes axes = principal_axes(dataset.feature_matrix(), 2);
    for (Sample& s : dataset.samples) {
        s.pca2[0] = s.features.dot(axes.components.col(0));
        s.pca2[1] = s.features.dot(axes.components.col(1));
    }
    dataset.has_pca = true;
    return dataset;
}

// Draws round(fraction * n) ids uniformly without replacement into the
// labeled side; the rest stay unlabeled.
inline Pool init_pool(const Dataset& dataset, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError("initial fraction must lie in (0, 1), got " + std::to_string(fraction));
    }
    const int n = dataset.n();
    const int k = static_cast<int>(std::llround(fraction * n));
    if (k < 2) throw ConfigError("initial labeled set must have at least 2 samples");

    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    for (int i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_index(static_cast<std::size_t>(n - i));
        std::swap(ids[i], ids[j]);
    }
    Pool pool;
    pool.labeled.assign(ids.begin(), ids.begin() + k);
    pool.unlabeled.assign(ids.begin() + k, ids.end());
    std::sort(pool.labeled.begin(), pool.labeled.end());
    std::sort(pool.unlabeled.begin(), pool.unlabeled.end());
    return pool;
}

// Moves `ids` from the unlabeled to the labeled side.
inline Pool move_to_labeled(Pool pool, const std::vector<int>& ids) {
    for (int id : ids) {
        auto it = std::lower_bound(pool.unlabeled.begin(), pool.unlabeled.end(), id);
        if (it == pool.unlabeled.end() || *it != id) {
            throw StateError("id " + std::to_string(id) + " is not in the unlabeled pool");
        }
        pool.unlabeled.erase(it);
        pool.labeled.insert(std::lower_bound(pool.labeled.begin(), pool.labeled.end(), id), id);
    }
    return pool;
}

}  // namespace frugal
