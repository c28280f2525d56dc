#pragma once

#include <string>

#include <Eigen/Dense>

namespace odkl::losses {

enum class LossKind { squared, logistic, hinge };

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

// Instantaneous local cost l(theta'z, y) + (lambda/n_agents) ||theta||^2.
// The squared loss carries no 1/2 factor, so the batch sum is exactly ridge
// regression with weight lambda. Classification labels must be in {-1, +1}.
struct LossSpec {
    LossKind kind = LossKind::squared;
    double lambda = 0.0;
    int n_agents = 1;
};

double cost(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta,
            const Eigen::Ref<const Eigen::VectorXd>& z, double y);

// Gradient (subgradient for hinge, zero at the kink).
Eigen::VectorXd gradient(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta,
                         const Eigen::Ref<const Eigen::VectorXd>& z, double y);

} // namespace odkl::losses
