#include "odkl/engine.hpp"

#include <cmath>

#include "odkl/errors.hpp"

namespace odkl::engine {

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "odkla")
        return Algorithm::odkla;
    if (name == "qc-odkla")
        return Algorithm::qc_odkla;
    if (name == "rff-dokl")
        return Algorithm::rff_dokl;
    if (name == "dokl")
        return Algorithm::dokl;
    throw ConfigError("algorithm: unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::odkla:
        return "odkla";
    case Algorithm::qc_odkla:
        return "qc-odkla";
    case Algorithm::rff_dokl:
        return "rff-dokl";
    case Algorithm::dokl:
        return "dokl";
    }
    return "?";
}

double EtaSchedule::at(int t) const {
    switch (kind) {
    case Kind::constant:
        return eta0;
    case Kind::inverse_sqrt:
        return eta0 / std::sqrt(static_cast<double>(t));
    case Kind::sqrt_growth:
        return eta0 * std::sqrt(static_cast<double>(t));
    }
    return eta0;
}

EtaSchedule::Kind eta_kind_from_string(const std::string& name) {
    if (name == "constant")
        return EtaSchedule::Kind::constant;
    if (name == "inverse_sqrt")
        return EtaSchedule::Kind::inverse_sqrt;
    if (name == "sqrt_growth")
        return EtaSchedule::Kind::sqrt_growth;
    throw ConfigError("hyper.eta_schedule: unknown schedule '" + name + "'");
}

std::string to_string(EtaSchedule::Kind kind) {
    switch (kind) {
    case EtaSchedule::Kind::constant:
        return "constant";
    case EtaSchedule::Kind::inverse_sqrt:
        return "inverse_sqrt";
    case EtaSchedule::Kind::sqrt_growth:
        return "sqrt_growth";
    }
    return "?";
}

namespace {

// Shared by the exact and broadcast-state variants so that, when the
// broadcast copies equal the exact states bit-for-bit, the updates do too.
Eigen::VectorXd disagreement_sum(const Eigen::VectorXd& center,
                                 const std::vector<const Eigen::VectorXd*>& neighbors) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(center.size());
    for (const Eigen::VectorXd* p : neighbors)
        s += center - *p;
    return s;
}

Eigen::VectorXd linearized_primal(const Eigen::VectorXd& theta, const Eigen::VectorXd& grad,
                                  const Eigen::VectorXd& gamma, const Eigen::VectorXd& center,
                                  const std::vector<const Eigen::VectorXd*>& neighbors,
                                  int degree, double rho, double eta_t) {
    const Eigen::VectorXd s = disagreement_sum(center, neighbors);
    return theta - (grad + rho * s + gamma) / (eta_t + 2.0 * rho * degree);
}

Eigen::VectorXd dual_update(const Eigen::VectorXd& gamma, const Eigen::VectorXd& center,
                            const std::vector<const Eigen::VectorXd*>& neighbors, double rho) {
    const Eigen::VectorXd s = disagreement_sum(center, neighbors);
    return gamma + rho * s;
}

std::vector<const Eigen::VectorXd*> hat_neighbor_ptrs(const AgentState& state) {
    std::vector<const Eigen::VectorXd*> ptrs;
    ptrs.reserve(state.hat.neighbors.size());
    for (const auto& v : state.hat.neighbors)
        ptrs.push_back(&v);
    return ptrs;
}

} // namespace

Eigen::VectorXd odkla_primal(const AgentState& state, const Eigen::VectorXd& grad,
                             const std::vector<const Eigen::VectorXd*>& neighbor_thetas,
                             int degree, double rho, double eta_t) {
    if (grad.size() != state.theta.size())
        throw DimensionMismatch("odkla_primal: grad/theta size mismatch");
    return linearized_primal(state.theta, grad, state.gamma, state.theta, neighbor_thetas,
                             degree, rho, eta_t);
}

Eigen::VectorXd odkla_dual(const AgentState& state,
                           const std::vector<const Eigen::VectorXd*>& neighbor_thetas_new,
                           double rho) {
    // state.theta must already hold theta_{i,t+1}.
    return dual_update(state.gamma, state.theta, neighbor_thetas_new, rho);
}

Eigen::VectorXd qc_primal(const AgentState& state, const Eigen::VectorXd& grad, int degree,
                          double rho, double eta_t) {
    if (grad.size() != state.theta.size())
        throw DimensionMismatch("qc_primal: grad/theta size mismatch");
    const auto ptrs = hat_neighbor_ptrs(state);
    return linearized_primal(state.theta, grad, state.gamma, state.hat.self, ptrs, degree, rho,
                             eta_t);
}

Eigen::VectorXd qc_dual(const AgentState& state, double rho) {
    const auto ptrs = hat_neighbor_ptrs(state);
    return dual_update(state.gamma, state.hat.self, ptrs, rho);
}

Eigen::VectorXd dokl_primal(const AgentState& state, const Sample& sample,
                            const std::vector<const Eigen::VectorXd*>& neighbor_thetas,
                            const losses::LossSpec& loss, double rho, double eta_t) {
    if (loss.kind != losses::LossKind::squared)
        throw UnsupportedLoss("dokl: exact primal solve supports the squared loss only");
    const auto degree = static_cast<double>(neighbor_thetas.size());
    const double a = eta_t + 2.0 * loss.lambda / loss.n_agents + 2.0 * rho * degree;
    Eigen::VectorXd rhs = 2.0 * sample.y * sample.z + eta_t * state.theta - state.gamma;
    for (const Eigen::VectorXd* p : neighbor_thetas)
        rhs += rho * (state.theta + *p);
    // (a I + 2 z z')^-1 rhs by the Sherman-Morrison identity.
    const double zz = sample.z.squaredNorm();
    const double zr = sample.z.dot(rhs);
    return rhs / a - (2.0 * zr / (a * (a + 2.0 * zz))) * sample.z;
}

Network::Network(const graph::Topology& topology, int dim2l, HyperParams params)
    : topology_(topology), dim2l_(dim2l), params_(std::move(params)) {
    const int n = topology_.size();
    agents_.resize(n);
    for (int i = 0; i < n; ++i) {
        agents_[i].theta = Eigen::VectorXd::Zero(dim2l_);
        agents_[i].gamma = Eigen::VectorXd::Zero(dim2l_);
        agents_[i].hat.self = Eigen::VectorXd::Zero(dim2l_);
        agents_[i].hat.neighbors.assign(topology_.neighbors(i).size(),
                                        Eigen::VectorXd::Zero(dim2l_));
    }
    hat_ptrs_.reserve(n);
    for (auto& a : agents_)
        hat_ptrs_.push_back(&a.hat);
}

std::vector<Eigen::VectorXd> Network::gradients(const std::vector<Sample>& samples) {
    std::vector<Eigen::VectorXd> grads(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        grads[i] = losses::gradient(params_.loss, agents_[i].theta, samples[i].z, samples[i].y);
        max_gradient_norm_ = std::max(max_gradient_norm_, grads[i].norm());
    }
    return grads;
}

void Network::exchange(const std::vector<Eigen::VectorXd>& theta_next, int t, bool lossless) {
    comm::CensorSpec censor = params_.censor;
    const comm::QuantizerSpec* quantizer =
        params_.quantizer.has_value() ? &*params_.quantizer : nullptr;
    if (lossless) {
        censor.enabled = false;
        quantizer = nullptr;
    }
    auto result = comm::round_exchange(topology_, theta_next, hat_ptrs_, censor, quantizer, t,
                                       params_.unquantized_bits_per_element, counters_);
    last_messages_ = std::move(result.messages);
    last_round_clips_ = result.clipped_elements;
}

void Network::step(Algorithm algorithm, const std::vector<Sample>& samples, int t) {
    if (static_cast<int>(samples.size()) != size())
        throw DimensionMismatch("Network::step: one sample per agent required");
    switch (algorithm) {
    case Algorithm::odkla:
        step_odkla(samples, t);
        break;
    case Algorithm::qc_odkla:
        step_qc(samples, t);
        break;
    case Algorithm::rff_dokl:
        step_rff_dokl(samples, t);
        break;
    case Algorithm::dokl:
        step_dokl(samples, t);
        break;
    }
    for (const auto& a : agents_)
        max_theta_norm_ = std::max(max_theta_norm_, a.theta.norm());
}

void Network::step_odkla(const std::vector<Sample>& samples, int t) {
    const int n = size();
    const double eta_t = params_.eta.at(t);
    const auto grads = gradients(samples);
    std::vector<Eigen::VectorXd> theta_next(n);
    for (int i = 0; i < n; ++i) {
        std::vector<const Eigen::VectorXd*> nbrs;
        nbrs.reserve(topology_.neighbors(i).size());
        for (int j : topology_.neighbors(i))
            nbrs.push_back(&agents_[j].theta);
        theta_next[i] =
            odkla_primal(agents_[i], grads[i], nbrs, topology_.degree(i), params_.rho, eta_t);
    }
    exchange(theta_next, t, /*lossless=*/true);
    for (int i = 0; i < n; ++i)
        agents_[i].theta = std::move(theta_next[i]);
    std::vector<Eigen::VectorXd> gamma_next(n);
    for (int i = 0; i < n; ++i) {
        std::vector<const Eigen::VectorXd*> nbrs;
        nbrs.reserve(topology_.neighbors(i).size());
        for (int j : topology_.neighbors(i))
            nbrs.push_back(&agents_[j].theta);
        gamma_next[i] = odkla_dual(agents_[i], nbrs, params_.rho);
    }
    for (int i = 0; i < n; ++i)
        agents_[i].gamma = std::move(gamma_next[i]);
}

void Network::step_qc(const std::vector<Sample>& samples, int t) {
    const int n = size();
    const double eta_t = params_.eta.at(t);
    const auto grads = gradients(samples);
    std::vector<Eigen::VectorXd> theta_next(n);
    for (int i = 0; i < n; ++i)
        theta_next[i] =
            qc_primal(agents_[i], grads[i], topology_.degree(i), params_.rho, eta_t);
    exchange(theta_next, t, /*lossless=*/false);
    for (int i = 0; i < n; ++i)
        agents_[i].theta = std::move(theta_next[i]);
    std::vector<Eigen::VectorXd> gamma_next(n);
    for (int i = 0; i < n; ++i)
        gamma_next[i] = qc_dual(agents_[i], params_.rho);
    for (int i = 0; i < n; ++i)
        agents_[i].gamma = std::move(gamma_next[i]);
}

void Network::step_rff_dokl(const std::vector<Sample>& samples, int t) {
    const int n = size();
    if (!combine_ready_) {
        combine_ = graph::metropolis_weights(topology_);
        combine_ready_ = true;
    }
    const double step = 1.0 / params_.eta.at(t);
    const auto grads = gradients(samples);
    // adapt
    std::vector<Eigen::VectorXd> psi(n);
    for (int i = 0; i < n; ++i)
        psi[i] = agents_[i].theta - step * grads[i];
    // broadcast psi, then combine from the stored copies
    exchange(psi, t, /*lossless=*/true);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd mixed = combine_(i, i) * psi[i];
        const auto& nbrs = topology_.neighbors(i);
        for (std::size_t k = 0; k < nbrs.size(); ++k)
            mixed += combine_(i, nbrs[k]) * agents_[i].hat.neighbors[k];
        agents_[i].theta = std::move(mixed);
    }
}

void Network::step_dokl(const std::vector<Sample>& samples, int t) {
    const int n = size();
    const double eta_t = params_.eta.at(t);
    gradients(samples); // gradient-norm tracking only; the solve is exact
    std::vector<Eigen::VectorXd> theta_next(n);
    for (int i = 0; i < n; ++i) {
        std::vector<const Eigen::VectorXd*> nbrs;
        nbrs.reserve(topology_.neighbors(i).size());
        for (int j : topology_.neighbors(i))
            nbrs.push_back(&agents_[j].theta);
        theta_next[i] =
            dokl_primal(agents_[i], samples[i], nbrs, params_.loss, params_.rho, eta_t);
    }
    exchange(theta_next, t, /*lossless=*/true);
    for (int i = 0; i < n; ++i)
        agents_[i].theta = std::move(theta_next[i]);
    std::vector<Eigen::VectorXd> gamma_next(n);
    for (int i = 0; i < n; ++i) {
        std::vector<const Eigen::VectorXd*> nbrs;
        nbrs.reserve(topology_.neighbors(i).size());
        for (int j : topology_.neighbors(i))
            nbrs.push_back(&agents_[j].theta);
        gamma_next[i] = odkla_dual(agents_[i], nbrs, params_.rho);
    }
    for (int i = 0; i < n; ++i)
        agents_[i].gamma = std::move(gamma_next[i]);
}

Eigen::MatrixXd Network::theta_stack() const {
    Eigen::MatrixXd m(size(), dim2l_);
    for (int i = 0; i < size(); ++i)
        m.row(i) = agents_[i].theta.transpose();
    return m;
}

Eigen::MatrixXd Network::gamma_stack() const {
    Eigen::MatrixXd m(size(), dim2l_);
    for (int i = 0; i < size(); ++i)
        m.row(i) = agents_[i].gamma.transpose();
    return m;
}

Eigen::MatrixXd Network::hat_stack() const {
    Eigen::MatrixXd m(size(), dim2l_);
    for (int i = 0; i < size(); ++i)
        m.row(i) = agents_[i].hat.self.transpose();
    return m;
}

double Network::hat_error_frobenius() const {
    double sq = 0.0;
    for (const auto& a : agents_)
        sq += (a.theta - a.hat.self).squaredNorm();
    return std::sqrt(sq);
}

double Network::dual_sum_norm() const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(dim2l_);
    for (const auto& a : agents_)
        s += a.gamma;
    return s.norm();
}

MatrixState::MatrixState(int n, int dim2l)
    : theta(Eigen::MatrixXd::Zero(n, dim2l)), gamma(Eigen::MatrixXd::Zero(n, dim2l)),
      theta_hat(Eigen::MatrixXd::Zero(n, dim2l)) {}

MatrixStepInfo matrix_reference_step(MatrixState& state, const Eigen::MatrixXd& grad_stack,
                                     const graph::Topology& topology, double rho, double eta_t,
                                     bool use_hat, const comm::CensorSpec& censor,
                                     const comm::QuantizerSpec* quantizer, int t) {
    const int n = topology.size();
    const Eigen::MatrixXd d = topology.degree_diagonal();
    const Eigen::MatrixXd w = topology.adjacency();
    const Eigen::MatrixXd lhs =
        eta_t * Eigen::MatrixXd::Identity(n, n) + 2.0 * rho * d;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    MatrixStepInfo info;

    if (!use_hat) {
        const Eigen::MatrixXd rhs =
            (rho * (d + w) + eta_t * Eigen::MatrixXd::Identity(n, n)) * state.theta -
            state.gamma - grad_stack;
        state.theta = lu.solve(rhs);
        state.theta_hat = state.theta;
        state.gamma += rho * (d - w) * state.theta;
        info.transmitters = n;
        return info;
    }

    const Eigen::MatrixXd next =
        state.theta - lu.solve(grad_stack + rho * (d - w) * state.theta_hat + state.gamma);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd h = (next.row(i) - state.theta_hat.row(i)).transpose();
        if (!comm::censor_decision(h, censor, t))
            continue;
        ++info.transmitters;
        if (quantizer) {
            int clips = 0;
            const auto codes = comm::quantize(*quantizer, h, &clips);
            state.theta_hat.row(i) += comm::dequantize(*quantizer, codes).transpose();
            info.clipped_elements += clips;
        } else {
            state.theta_hat.row(i) = next.row(i);
        }
    }
    state.theta = next;
    state.gamma += rho * (d - w) * state.theta_hat;
    return info;
}

} // namespace odkl::engine
