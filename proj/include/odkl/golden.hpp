#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "odkl/config.hpp"

namespace odkl::golden {

struct Snapshot {
    int t = 0; // round that produced these states
    Eigen::MatrixXd theta;
    Eigen::MatrixXd gamma;
};

struct GoldenTrace {
    std::uint64_t config_hash = 0;
    std::vector<Snapshot> snapshots;
};

// The fixture runs checked into tests/fixtures: one ODKLA, one QC-ODKLA
// with censoring and quantization active.
std::vector<config::RunConfig> golden_configs();
std::vector<int> golden_checkpoints(); // {1, 10, 100}

// Regenerates the trace with the dense matrix-form recursion, which is
// independent of the per-agent engine path the tests exercise.
GoldenTrace generate(const config::RunConfig& config);

void write(const GoldenTrace& trace, const std::filesystem::path& path);

enum class LoadStatus { ok, hash_mismatch };

// Loads a fixture; hash_mismatch flags a stale fixture whose embedded hash
// differs from the hash of `expected`.
LoadStatus load(const std::filesystem::path& path, const config::RunConfig& expected,
                GoldenTrace& out);

std::filesystem::path fixture_filename(const config::RunConfig& config);

} // namespace odkl::golden
