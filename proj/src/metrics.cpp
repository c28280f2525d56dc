#include "odkl/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "odkl/errors.hpp"

namespace odkl::metrics {

void write_csv(const std::vector<MetricsRecord>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("metrics::write_csv: cannot open '" + path.string() + "'");
    out << kCsvHeader << '\n';
    char buf[320];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%lld,%lld,%lld,%.10g,%.10g,%.10g\n",
                      r.t, r.mse_inst, r.mse_running, r.regret_cum,
                      static_cast<long long>(r.triggers_cum), static_cast<long long>(r.bits_cum),
                      static_cast<long long>(r.clip_events_cum), r.error_frob, r.error_bound,
                      r.step_time_us);
        out << buf;
    }
}

Eigen::VectorXd centralized_oracle(const data::AgentStreams& streams,
                                   const features::RFBasis& basis, double lambda) {
    const int dim2l = 2 * basis.l_count;
    const int n_agents = streams.agents();
    const int rounds = streams.rounds();

    if (lambda > 0.0) {
        // Streaming normal equations; never materializes Z.
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim2l, dim2l);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(dim2l);
        for (int i = 0; i < n_agents; ++i) {
            for (int t = 0; t < rounds; ++t) {
                const Eigen::VectorXd z =
                    features::map(basis, streams.features[i].row(t).transpose());
                a.selfadjointView<Eigen::Lower>().rankUpdate(z);
                b.noalias() += streams.labels[i](t) * z;
            }
        }
        a = a.selfadjointView<Eigen::Lower>();
        a.diagonal().array() += lambda;
        return Eigen::LLT<Eigen::MatrixXd>(a).solve(b);
    }

    // lambda = 0: minimum-norm least squares on the explicit design matrix.
    Eigen::MatrixXd z_all(static_cast<Eigen::Index>(n_agents) * rounds, dim2l);
    Eigen::VectorXd y_all(z_all.rows());
    Eigen::Index row = 0;
    for (int i = 0; i < n_agents; ++i) {
        for (int t = 0; t < rounds; ++t, ++row) {
            z_all.row(row) =
                features::map(basis, streams.features[i].row(t).transpose()).transpose();
            y_all(row) = streams.labels[i](t);
        }
    }
    return z_all.completeOrthogonalDecomposition().solve(y_all);
}

std::vector<double> regret_curve(const std::vector<std::vector<Eigen::VectorXd>>& trajectory,
                                 const data::AgentStreams& streams,
                                 const features::RFBasis& basis,
                                 const Eigen::VectorXd& theta_star,
                                 const losses::LossSpec& loss) {
    std::vector<double> curve;
    curve.reserve(trajectory.size());
    double total = 0.0;
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        for (int i = 0; i < streams.agents(); ++i) {
            const Eigen::VectorXd z =
                features::map(basis, streams.features[i].row(static_cast<Eigen::Index>(t)).transpose());
            const double y = streams.labels[i](static_cast<Eigen::Index>(t));
            total += losses::cost(loss, trajectory[t][static_cast<std::size_t>(i)], z, y) -
                     losses::cost(loss, theta_star, z, y);
        }
        curve.push_back(total);
    }
    return curve;
}

double RegretAccumulator::add_round(const std::vector<Eigen::VectorXd>& thetas,
                                    const std::vector<Eigen::VectorXd>& zs,
                                    const Eigen::VectorXd& ys) {
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        total_ += losses::cost(loss_, thetas[i], zs[i], ys(static_cast<Eigen::Index>(i))) -
                  losses::cost(loss_, theta_star_, zs[i], ys(static_cast<Eigen::Index>(i)));
    }
    return total_;
}

double sublinearity_fit(const std::vector<double>& regret_curve,
                        const std::vector<int>& t_checkpoints) {
    if (t_checkpoints.size() < 4)
        throw Error("sublinearity_fit: need at least 4 checkpoints");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(t_checkpoints.size());
    for (int t : t_checkpoints) {
        if (t < 1 || static_cast<std::size_t>(t) > regret_curve.size())
            throw Error("sublinearity_fit: checkpoint " + std::to_string(t) + " out of range");
        const double r = regret_curve[static_cast<std::size_t>(t - 1)];
        if (!(r > 0.0))
            throw DegenerateRegret("sublinearity_fit: regret " + std::to_string(r) +
                                   " at t=" + std::to_string(t) + " is not positive");
        const double x = std::log(static_cast<double>(t));
        const double y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double error_bound_zeta(int n_agents, int l_count, const comm::CensorSpec& censor,
                        const comm::QuantizerSpec* quantizer) {
    double zeta = 0.0;
    if (censor.enabled)
        zeta = std::max(zeta, std::sqrt(static_cast<double>(n_agents)) * censor.alpha * censor.beta);
    if (quantizer)
        zeta = std::max(zeta, std::sqrt(2.0 * n_agents * l_count) * quantizer->delta() / 2.0);
    return zeta;
}

ErrorBoundResult error_bound_check(double error_frob, int n_agents, int l_count,
                                   const comm::CensorSpec& censor,
                                   const comm::QuantizerSpec* quantizer) {
    ErrorBoundResult result;
    result.zeta = error_bound_zeta(n_agents, l_count, censor, quantizer);
    result.pass = error_frob <= result.zeta + 1e-9;
    return result;
}

} // namespace odkl::metrics
