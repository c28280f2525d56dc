#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "odkl/engine.hpp"
#include "odkl/losses.hpp"

namespace odkl::config {

// Complete description of one experiment. Parsed from / serialized to a
// flat key=value text format with dotted section names; '#' starts a
// comment. parse(serialize(c)) == c.
struct RunConfig {
    // dataset
    std::string dataset_kind = "synthetic"; // synthetic | csv
    std::string dataset_path;
    std::string dataset_label_column = "y"; // name, or numeric index
    char dataset_delimiter = ',';
    int dataset_samples = 20000;
    int dataset_dim = 5;
    double dataset_sigma_true = 0.5;
    double dataset_noise_std = 0.1;
    std::uint64_t dataset_seed = 7;

    std::string algorithm = "odkla";
    int n_agents = 5;

    double graph_edge_prob = 0.5;
    std::uint64_t graph_seed = 1;

    int rf_l_count = 50;
    double rf_sigma = 0.5;
    std::uint64_t rf_seed = 1;

    std::string loss_kind = "squared";
    double loss_lambda = 1e-4;

    double hyper_rho = 0.05;
    std::string hyper_eta_schedule = "constant";
    double hyper_eta0 = 5.0;

    bool censor_enabled = false;
    double censor_alpha = 4.0;
    double censor_beta = 0.99;

    bool quantizer_enabled = false;
    int quantizer_bits = 3;
    double quantizer_range = 4.0; // half-open range [-range, range)

    int t_max = 0; // 0 = run the whole stream
    std::string output = "results.csv";
    std::uint64_t run_seed = 1;
    bool timing_enabled = false; // off keeps output byte-reproducible

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse(const std::string& text);
RunConfig parse_file(const std::filesystem::path& path);
std::string serialize(const RunConfig& config);

// Field-by-field validation; throws ConfigError naming the offending key.
void validate(const RunConfig& config);

// Typed views assembled from the validated config.
losses::LossSpec loss_spec(const RunConfig& config);
engine::HyperParams hyper_params(const RunConfig& config);
engine::Algorithm algorithm(const RunConfig& config);

// FNV-1a hash of the canonical serialization; identifies golden fixtures.
std::uint64_t config_hash(const RunConfig& config);

} // namespace odkl::config
