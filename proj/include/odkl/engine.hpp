#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "odkl/comm.hpp"
#include "odkl/graph.hpp"
#include "odkl/losses.hpp"

namespace odkl::engine {

enum class Algorithm { odkla, qc_odkla, rff_dokl, dokl };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm a);

struct EtaSchedule {
    enum class Kind { constant, inverse_sqrt, sqrt_growth };
    Kind kind = Kind::constant;
    double eta0 = 1.0;

    // t is the 1-based round index.
    double at(int t) const;
};

EtaSchedule::Kind eta_kind_from_string(const std::string& name);
std::string to_string(EtaSchedule::Kind kind);

struct HyperParams {
    double rho = 0.1;
    EtaSchedule eta;
    losses::LossSpec loss;
    comm::CensorSpec censor;
    std::optional<comm::QuantizerSpec> quantizer;
    int unquantized_bits_per_element = 32;
};

// theta and gamma start at zero; hat holds the last-broadcast copies.
struct AgentState {
    Eigen::VectorXd theta;
    Eigen::VectorXd gamma;
    comm::HatTable hat;
};

struct Sample {
    Eigen::VectorXd z; // RF-mapped input, length 2L
    double y = 0.0;
};

// Per-agent update rules. neighbor list pointers must cover exactly the
// agent's neighbors, in Topology order.

Eigen::VectorXd odkla_primal(const AgentState& state, const Eigen::VectorXd& grad,
                             const std::vector<const Eigen::VectorXd*>& neighbor_thetas,
                             int degree, double rho, double eta_t);

Eigen::VectorXd odkla_dual(const AgentState& state,
                           const std::vector<const Eigen::VectorXd*>& neighbor_thetas_new,
                           double rho);

// Same update with last-broadcast states replacing the exact neighbor ones.
Eigen::VectorXd qc_primal(const AgentState& state, const Eigen::VectorXd& grad, int degree,
                          double rho, double eta_t);

Eigen::VectorXd qc_dual(const AgentState& state, double rho);

// Exact ADMM primal for the squared loss: minimizes
//   L_it(theta) + (eta/2)||theta - theta_i||^2 + gamma_i'theta
//     + rho * sum_j ||theta - (theta_i + theta_j)/2||^2
// in closed form via a rank-one update. Throws UnsupportedLoss otherwise.
Eigen::VectorXd dokl_primal(const AgentState& state, const Sample& sample,
                            const std::vector<const Eigen::VectorXd*>& neighbor_thetas,
                            const losses::LossSpec& loss, double rho, double eta_t);

// Synchronous network of agents running one of the four algorithms.
// A full run is deterministic for a fixed topology, inputs, and params.
class Network {
  public:
    Network(const graph::Topology& topology, int dim2l, HyperParams params);

    // One synchronous round; samples holds one (z, y) per agent. t is the
    // 1-based round index. Round order: primal, exchange, dual.
    void step(Algorithm algorithm, const std::vector<Sample>& samples, int t);

    int size() const { return static_cast<int>(agents_.size()); }
    int dim() const { return dim2l_; }
    const graph::Topology& topology() const { return topology_; }
    const HyperParams& params() const { return params_; }
    const AgentState& agent(int i) const { return agents_[i]; }
    const comm::ExchangeCounters& counters() const { return counters_; }
    const std::vector<comm::Message>& last_messages() const { return last_messages_; }
    int last_round_clips() const { return last_round_clips_; }

    Eigen::MatrixXd theta_stack() const;    // N x 2L
    Eigen::MatrixXd gamma_stack() const;    // N x 2L
    Eigen::MatrixXd hat_stack() const;      // N x 2L, own broadcast states
    double hat_error_frobenius() const;     // ||Theta - Hat||_F
    double dual_sum_norm() const;           // ||sum_i gamma_i||_2
    double max_gradient_norm() const { return max_gradient_norm_; }
    double max_theta_norm() const { return max_theta_norm_; }

  private:
    void step_odkla(const std::vector<Sample>& samples, int t);
    void step_qc(const std::vector<Sample>& samples, int t);
    void step_rff_dokl(const std::vector<Sample>& samples, int t);
    void step_dokl(const std::vector<Sample>& samples, int t);

    std::vector<Eigen::VectorXd> gradients(const std::vector<Sample>& samples);
    void exchange(const std::vector<Eigen::VectorXd>& theta_next, int t, bool lossless);

    graph::Topology topology_;
    int dim2l_;
    HyperParams params_;
    std::vector<AgentState> agents_;
    std::vector<comm::HatTable*> hat_ptrs_;
    Eigen::MatrixXd combine_; // metropolis weights, built lazily for rff-dokl
    bool combine_ready_ = false;
    comm::ExchangeCounters counters_;
    std::vector<comm::Message> last_messages_;
    int last_round_clips_ = 0;
    double max_gradient_norm_ = 0.0;
    double max_theta_norm_ = 0.0;
};

// Dense stacked recursion used as the correctness oracle for the per-agent
// paths. The primal solve goes through a generic dense LU factorization
// rather than the per-agent scalar divisions.
struct MatrixState {
    Eigen::MatrixXd theta;     // N x 2L
    Eigen::MatrixXd gamma;     // N x 2L
    Eigen::MatrixXd theta_hat; // N x 2L

    MatrixState(int n, int dim2l);
};

struct MatrixStepInfo {
    int transmitters = 0;
    int clipped_elements = 0;
};

// use_hat = false runs the exact-exchange recursion
//   Theta' = (eta I + 2 rho D)^-1 [(rho (D+W) + eta I) Theta - Gamma - G]
//   Gamma' = Gamma + rho (D-W) Theta'
// use_hat = true runs the broadcast-state variant with censoring and
// quantization applied between the primal and dual updates.
MatrixStepInfo matrix_reference_step(MatrixState& state, const Eigen::MatrixXd& grad_stack,
                                     const graph::Topology& topology, double rho, double eta_t,
                                     bool use_hat, const comm::CensorSpec& censor,
                                     const comm::QuantizerSpec* quantizer, int t);

} // namespace odkl::engine
