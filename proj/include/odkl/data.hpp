#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "odkl/features.hpp"

namespace odkl::data {

struct Dataset {
    Eigen::MatrixXd features; // rows x d
    Eigen::VectorXd labels;   // rows
    std::vector<std::string> feature_names;
    int dropped_rows = 0; // unparseable rows skipped during load

    Eigen::Index rows() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }
};

// Disjoint per-agent streams of equal length floor(total / n); remainder
// rows are dropped.
struct AgentStreams {
    std::vector<Eigen::MatrixXd> features; // per agent: T x d
    std::vector<Eigen::VectorXd> labels;   // per agent: T

    int agents() const { return static_cast<int>(features.size()); }
    int rounds() const { return features.empty() ? 0 : static_cast<int>(features[0].rows()); }
};

using LabelColumn = std::variant<int, std::string>;

// Numeric CSV loader. A non-numeric first row is treated as a header; rows
// with unparseable fields are dropped and counted in Dataset::dropped_rows.
Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column,
                 char delimiter = ',');

// Per-feature (x - min) / (max - min); constant features map to 0. Labels
// are left untouched.
Dataset normalize_minmax(Dataset dataset);

AgentStreams shuffle_partition(const Dataset& dataset, int n_agents, std::uint64_t seed);

// Ground-truth function behind a synthetic dataset: a fixed random element
// of the RF function class for the given bandwidth.
struct SynthFunction {
    features::RFBasis basis;
    Eigen::VectorXd weights;

    double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

struct SynthResult {
    Dataset dataset;
    SynthFunction truth;
};

// x uniform on [0,1]^dim, y = f(x) + Gaussian noise with std noise_std.
SynthResult synthesize(int n_samples, int dim, double sigma_true, double noise_std,
                       std::uint64_t seed);

// Writes the same schema load_csv reads: feature columns then a final label
// column named y.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

} // namespace odkl::data
