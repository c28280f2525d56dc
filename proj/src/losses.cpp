#include "odkl/losses.hpp"

#include <cmath>

#include "odkl/errors.hpp"

namespace odkl::losses {

LossKind loss_kind_from_string(const std::string& name) {
    if (name == "squared")
        return LossKind::squared;
    if (name == "logistic")
        return LossKind::logistic;
    if (name == "hinge")
        return LossKind::hinge;
    throw ConfigError("loss.kind: unknown loss '" + name + "'");
}

std::string to_string(LossKind kind) {
    switch (kind) {
    case LossKind::squared:
        return "squared";
    case LossKind::logistic:
        return "logistic";
    case LossKind::hinge:
        return "hinge";
    }
    return "?";
}

namespace {

void check_dims(const Eigen::Ref<const Eigen::VectorXd>& theta,
                const Eigen::Ref<const Eigen::VectorXd>& z) {
    if (theta.size() != z.size())
        throw DimensionMismatch("losses: theta and z sizes differ (" +
                                std::to_string(theta.size()) + " vs " + std::to_string(z.size()) +
                                ")");
}

// log(1 + exp(-u)) without overflow for large |u|.
double log1p_exp_neg(double u) {
    if (u >= 0.0)
        return std::log1p(std::exp(-u));
    return -u + std::log1p(std::exp(u));
}

} // namespace

double cost(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta,
            const Eigen::Ref<const Eigen::VectorXd>& z, double y) {
    check_dims(theta, z);
    const double pred = theta.dot(z);
    const double reg = spec.lambda / spec.n_agents * theta.squaredNorm();
    switch (spec.kind) {
    case LossKind::squared: {
        const double r = pred - y;
        return r * r + reg;
    }
    case LossKind::logistic:
        return log1p_exp_neg(y * pred) + reg;
    case LossKind::hinge:
        return std::max(0.0, 1.0 - y * pred) + reg;
    }
    return 0.0;
}

Eigen::VectorXd gradient(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta,
                         const Eigen::Ref<const Eigen::VectorXd>& z, double y) {
    check_dims(theta, z);
    const double pred = theta.dot(z);
    Eigen::VectorXd g = (2.0 * spec.lambda / spec.n_agents) * theta;
    switch (spec.kind) {
    case LossKind::squared:
        g.noalias() += 2.0 * (pred - y) * z;
        break;
    case LossKind::logistic: {
        // -y z / (1 + exp(y theta'z))
        const double u = y * pred;
        const double s = 1.0 / (1.0 + std::exp(u));
        g.noalias() += (-y * s) * z;
        break;
    }
    case LossKind::hinge:
        if (1.0 - y * pred > 0.0)
            g.noalias() += -y * z;
        break;
    }
    return g;
}

} // namespace odkl::losses
