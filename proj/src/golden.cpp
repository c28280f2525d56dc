#include "odkl/golden.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "odkl/errors.hpp"
#include "odkl/losses.hpp"
#include "odkl/simulation.hpp"

namespace odkl::golden {

std::vector<config::RunConfig> golden_configs() {
    config::RunConfig base;
    base.dataset_kind = "synthetic";
    base.dataset_samples = 600;
    base.dataset_dim = 3;
    base.dataset_sigma_true = 0.5;
    base.dataset_noise_std = 0.1;
    base.dataset_seed = 7;
    base.n_agents = 5;
    base.graph_edge_prob = 0.6;
    base.graph_seed = 7;
    base.rf_l_count = 4;
    base.rf_sigma = 0.5;
    base.rf_seed = 7;
    base.loss_kind = "squared";
    base.loss_lambda = 1e-4;
    base.hyper_rho = 0.1;
    base.hyper_eta_schedule = "constant";
    base.hyper_eta0 = 2.0;
    base.t_max = 100;
    base.run_seed = 7;

    config::RunConfig odkla = base;
    odkla.algorithm = "odkla";

    config::RunConfig qc = base;
    qc.algorithm = "qc-odkla";
    qc.censor_enabled = true;
    qc.censor_alpha = 4.0;
    qc.censor_beta = 0.99;
    qc.quantizer_enabled = true;
    qc.quantizer_bits = 3;
    qc.quantizer_range = 4.0;

    return {odkla, qc};
}

std::vector<int> golden_checkpoints() { return {1, 10, 100}; }

GoldenTrace generate(const config::RunConfig& c) {
    simulation::Inputs inputs = simulation::build_inputs(c);
    const auto loss = config::loss_spec(c);
    const auto hp = config::hyper_params(c);
    const bool use_hat = config::algorithm(c) == engine::Algorithm::qc_odkla;
    const int n = c.n_agents;
    const int dim2l = 2 * c.rf_l_count;

    GoldenTrace trace;
    trace.config_hash = config::config_hash(c);
    const auto checkpoints = golden_checkpoints();

    engine::MatrixState state(n, dim2l);
    for (int t = 1; t <= inputs.rounds; ++t) {
        const auto samples = simulation::round_samples(inputs.streams, inputs.basis, t);
        Eigen::MatrixXd grads(n, dim2l);
        for (int i = 0; i < n; ++i)
            grads.row(i) = losses::gradient(loss, state.theta.row(i).transpose(),
                                            samples[static_cast<std::size_t>(i)].z,
                                            samples[static_cast<std::size_t>(i)].y)
                               .transpose();
        engine::matrix_reference_step(state, grads, inputs.topology, hp.rho, hp.eta.at(t),
                                      use_hat, hp.censor,
                                      hp.quantizer.has_value() ? &*hp.quantizer : nullptr, t);
        if (std::find(checkpoints.begin(), checkpoints.end(), t) != checkpoints.end())
            trace.snapshots.push_back(Snapshot{t, state.theta, state.gamma});
    }
    return trace;
}

void write(const GoldenTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("golden::write: cannot open '" + path.string() + "'");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(trace.config_hash));
    out << "# config_hash=" << buf << '\n';
    out << "t,kind,agent,values\n";
    for (const auto& snap : trace.snapshots) {
        for (int which = 0; which < 2; ++which) {
            const Eigen::MatrixXd& m = which == 0 ? snap.theta : snap.gamma;
            const char* kind = which == 0 ? "theta" : "gamma";
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                out << snap.t << ',' << kind << ',' << i;
                for (Eigen::Index j = 0; j < m.cols(); ++j) {
                    std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
                    out << ',' << buf;
                }
                out << '\n';
            }
        }
    }
}

LoadStatus load(const std::filesystem::path& path, const config::RunConfig& expected,
                GoldenTrace& out) {
    std::ifstream in(path);
    if (!in)
        throw IoError("golden::load: cannot open '" + path.string() + "'");
    out = GoldenTrace{};
    std::string line;
    bool saw_hash = false;
    std::map<int, Snapshot> by_round;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line.rfind("# config_hash=", 0) == 0) {
            out.config_hash = std::stoull(line.substr(14), nullptr, 16);
            saw_hash = true;
            continue;
        }
        if (line[0] == '#' || line.rfind("t,", 0) == 0)
            continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        const int t = std::stoi(field);
        std::getline(row, field, ',');
        const std::string kind = field;
        std::getline(row, field, ',');
        const int agent = std::stoi(field);
        std::vector<double> values;
        while (std::getline(row, field, ','))
            values.push_back(std::stod(field));
        auto& snap = by_round[t];
        snap.t = t;
        const auto dim = static_cast<Eigen::Index>(values.size());
        if (snap.theta.size() == 0) {
            snap.theta.resize(expected.n_agents, dim);
            snap.gamma.resize(expected.n_agents, dim);
        }
        Eigen::MatrixXd& m = kind == "theta" ? snap.theta : snap.gamma;
        for (Eigen::Index j = 0; j < dim; ++j)
            m(agent, j) = values[static_cast<std::size_t>(j)];
    }
    if (!saw_hash)
        throw ParseError("golden::load: '" + path.string() + "' has no config hash header");
    for (auto& [t, snap] : by_round)
        out.snapshots.push_back(std::move(snap));
    return out.config_hash == config::config_hash(expected) ? LoadStatus::ok
                                                            : LoadStatus::hash_mismatch;
}

std::filesystem::path fixture_filename(const config::RunConfig& c) {
    std::string name = c.algorithm;
    std::replace(name.begin(), name.end(), '-', '_');
    return name + "_n" + std::to_string(c.n_agents) + "_l" + std::to_string(c.rf_l_count) +
           "_seed" + std::to_string(c.run_seed) + ".csv";
}

} // namespace odkl::golden
