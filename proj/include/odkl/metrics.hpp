#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "odkl/comm.hpp"
#include "odkl/data.hpp"
#include "odkl/features.hpp"
#include "odkl/losses.hpp"

namespace odkl::metrics {

// One row of the per-round results CSV. error_frob is measured after the
// round's exchange (theta and broadcast states as produced by this round),
// so the clip exemption lines up with the row's own clip delta.
struct MetricsRecord {
    int t = 0;
    double mse_inst = 0.0;
    double mse_running = 0.0;
    double regret_cum = 0.0;
    std::int64_t triggers_cum = 0;
    std::int64_t bits_cum = 0;
    std::int64_t clip_events_cum = 0;
    double error_frob = 0.0;
    double error_bound = 0.0;
    double step_time_us = 0.0;
    // Running maxima of the gradient and iterate norms; tracked per round
    // but not part of the CSV schema.
    double max_grad_norm = 0.0;
    double max_theta_norm = 0.0;
};

inline constexpr const char* kCsvHeader =
    "t,mse_inst,mse_running,regret_cum,triggers_cum,bits_cum,clip_events_cum,error_frob,"
    "error_bound,step_time_us";

void write_csv(const std::vector<MetricsRecord>& rows, const std::filesystem::path& path);

// Batch ridge solution over all stream samples mapped through the basis:
//   argmin sum_{i,t} (theta'z_{i,t} - y_{i,t})^2 + lambda ||theta||^2.
// lambda = 0 falls back to the minimum-norm least-squares solution.
Eigen::VectorXd centralized_oracle(const data::AgentStreams& streams,
                                   const features::RFBasis& basis, double lambda);

// Brute-force cumulative network regret: R(T) = sum_t sum_i
// [L_it(theta_{i,t}) - L_it(theta*)]. trajectory[t][i] is the iterate the
// agent held while predicting round t's sample. Used as the oracle for the
// streaming accumulator below.
std::vector<double> regret_curve(const std::vector<std::vector<Eigen::VectorXd>>& trajectory,
                                 const data::AgentStreams& streams,
                                 const features::RFBasis& basis,
                                 const Eigen::VectorXd& theta_star,
                                 const losses::LossSpec& loss);

// Streaming accumulator the simulator feeds one round at a time.
class RegretAccumulator {
  public:
    RegretAccumulator(Eigen::VectorXd theta_star, losses::LossSpec loss)
        : theta_star_(std::move(theta_star)), loss_(loss) {}

    // theta[i] is agent i's iterate before the round-t update.
    double add_round(const std::vector<Eigen::VectorXd>& thetas,
                     const std::vector<Eigen::VectorXd>& zs, const Eigen::VectorXd& ys);

    double total() const { return total_; }

  private:
    Eigen::VectorXd theta_star_;
    losses::LossSpec loss_;
    double total_ = 0.0;
};

// Least-squares slope of log R(T) against log T at the checkpoints. Throws
// DegenerateRegret if R <= 0 at any checkpoint.
double sublinearity_fit(const std::vector<double>& regret_curve,
                        const std::vector<int>& t_checkpoints);

// Uniform bound on the stacked broadcast error introduced by censoring and
// quantization: max over the enabled mechanisms of sqrt(N) alpha beta and
// sqrt(2NL) delta / 2. Holds on every round without fresh range clips.
double error_bound_zeta(int n_agents, int l_count, const comm::CensorSpec& censor,
                        const comm::QuantizerSpec* quantizer);

struct ErrorBoundResult {
    bool pass = false;
    double zeta = 0.0;
};

ErrorBoundResult error_bound_check(double error_frob, int n_agents, int l_count,
                                   const comm::CensorSpec& censor,
                                   const comm::QuantizerSpec* quantizer);

} // namespace odkl::metrics
