#include "odkl/simulation.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "odkl/errors.hpp"
#include "odkl/graph.hpp"
#include "odkl/losses.hpp"

namespace odkl::simulation {

namespace {

data::Dataset load_dataset(const config::RunConfig& c) {
    if (c.dataset_kind == "csv") {
        data::LabelColumn label;
        try {
            std::size_t pos = 0;
            int idx = std::stoi(c.dataset_label_column, &pos);
            if (pos == c.dataset_label_column.size())
                label = idx;
            else
                label = c.dataset_label_column;
        } catch (const std::exception&) {
            label = c.dataset_label_column;
        }
        return data::load_csv(c.dataset_path, label, c.dataset_delimiter);
    }
    return data::synthesize(c.dataset_samples, c.dataset_dim, c.dataset_sigma_true,
                            c.dataset_noise_std, c.dataset_seed)
        .dataset;
}

data::AgentStreams truncate(data::AgentStreams streams, int rounds) {
    for (auto& m : streams.features)
        m.conservativeResize(rounds, Eigen::NoChange);
    for (auto& v : streams.labels)
        v.conservativeResize(rounds);
    return streams;
}

} // namespace

Inputs build_inputs(const config::RunConfig& c) {
    config::validate(c);
    data::Dataset dataset = data::normalize_minmax(load_dataset(c));
    data::AgentStreams streams = data::shuffle_partition(dataset, c.n_agents, c.run_seed);
    int rounds = streams.rounds();
    if (c.t_max > 0 && c.t_max < rounds) {
        rounds = c.t_max;
        streams = truncate(std::move(streams), rounds);
    }
    return Inputs{std::move(streams),
                  features::sample_basis(c.rf_l_count, static_cast<int>(dataset.dim()), c.rf_sigma,
                                         c.rf_seed),
                  graph::random_connected_graph(c.n_agents, c.graph_edge_prob, c.graph_seed),
                  rounds};
}

std::vector<engine::Sample> round_samples(const data::AgentStreams& streams,
                                          const features::RFBasis& basis, int t) {
    std::vector<engine::Sample> samples(static_cast<std::size_t>(streams.agents()));
    for (int i = 0; i < streams.agents(); ++i) {
        samples[static_cast<std::size_t>(i)].z =
            features::map(basis, streams.features[i].row(t - 1).transpose());
        samples[static_cast<std::size_t>(i)].y = streams.labels[i](t - 1);
    }
    return samples;
}

RunResult run_simulation(const config::RunConfig& c, const RunHooks& hooks) {
    Inputs inputs = build_inputs(c);
    const auto algo = config::algorithm(c);
    const auto loss = config::loss_spec(c);
    engine::HyperParams hp = config::hyper_params(c);
    const int n = c.n_agents;
    const int dim2l = 2 * c.rf_l_count;

    if (hooks.graph_dump)
        graph::write_edge_list(inputs.topology, *hooks.graph_dump);

    // Regret comparator: the batch optimum over exactly the samples the run
    // will consume. Squared loss only.
    const bool regret_available = loss.kind == losses::LossKind::squared;
    Eigen::VectorXd theta_star = Eigen::VectorXd::Zero(dim2l);
    if (regret_available)
        theta_star = metrics::centralized_oracle(inputs.streams, inputs.basis, c.loss_lambda);
    metrics::RegretAccumulator regret(theta_star, loss);

    engine::Network net(inputs.topology, dim2l, hp);
    const double zeta = metrics::error_bound_zeta(
        n, c.rf_l_count, hp.censor, hp.quantizer.has_value() ? &*hp.quantizer : nullptr);
    const bool tracks_hat_error = algo != engine::Algorithm::rff_dokl;

    RunResult result;
    result.rows.reserve(static_cast<std::size_t>(inputs.rounds));
    double mse_sum = 0.0;
    double step_time_sum = 0.0;

    std::vector<Eigen::VectorXd> thetas_before(static_cast<std::size_t>(n));
    for (int t = 1; t <= inputs.rounds; ++t) {
        const auto samples = round_samples(inputs.streams, inputs.basis, t);

        // Predictions use the pre-update iterates: genuine online evaluation.
        double mse = 0.0;
        Eigen::VectorXd ys(n);
        std::vector<Eigen::VectorXd> zs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto& s = samples[static_cast<std::size_t>(i)];
            const double err = net.agent(i).theta.dot(s.z) - s.y;
            mse += err * err;
            thetas_before[static_cast<std::size_t>(i)] = net.agent(i).theta;
            zs[static_cast<std::size_t>(i)] = s.z;
            ys(i) = s.y;
        }
        mse /= n;
        mse_sum += mse;
        double regret_cum = 0.0;
        if (regret_available)
            regret_cum = regret.add_round(thetas_before, zs, ys);

        double step_us = 0.0;
        if (c.timing_enabled) {
            const auto start = std::chrono::steady_clock::now();
            net.step(algo, samples, t);
            const auto stop = std::chrono::steady_clock::now();
            step_us = std::chrono::duration<double, std::micro>(stop - start).count();
            step_time_sum += step_us;
        } else {
            net.step(algo, samples, t);
        }

        metrics::MetricsRecord row;
        row.t = t;
        row.mse_inst = mse;
        row.mse_running = mse_sum / t;
        row.regret_cum = regret_cum;
        row.triggers_cum = net.counters().triggers;
        row.bits_cum = net.counters().bits;
        row.clip_events_cum = net.counters().clipped_elements;
        row.error_frob = tracks_hat_error ? net.hat_error_frobenius() : 0.0;
        row.error_bound = zeta;
        row.step_time_us = step_us;
        row.max_grad_norm = net.max_gradient_norm();
        row.max_theta_norm = net.max_theta_norm();
        result.rows.push_back(row);

        if (hooks.trace) {
            for (const auto& msg : net.last_messages())
                *hooks.trace << msg.round << ',' << msg.sender << ',' << msg.bits << ','
                             << msg.clipped_elements << '\n';
        }
        if (hooks.after_round)
            hooks.after_round(t, net);
    }

    auto& s = result.summary;
    s.algorithm = c.algorithm;
    s.n_agents = n;
    s.l_count = c.rf_l_count;
    s.rounds = inputs.rounds;
    s.final_mse_running = inputs.rounds > 0 ? result.rows.back().mse_running : 0.0;
    s.regret_available = regret_available;
    s.final_regret = regret.total();
    s.triggers = net.counters().triggers;
    s.bits = net.counters().bits;
    s.clip_events = net.counters().clipped_elements;
    s.mean_step_time_us = inputs.rounds > 0 ? step_time_sum / inputs.rounds : 0.0;
    s.max_gradient_norm = net.max_gradient_norm();
    s.max_theta_norm = net.max_theta_norm();
    return result;
}

void write_summary(const RunSummary& s, std::ostream& out) {
    out << "algorithm:        " << s.algorithm << '\n'
        << "agents:           " << s.n_agents << '\n'
        << "rounds:           " << s.rounds << '\n'
        << "final running MSE: " << s.final_mse_running << '\n';
    if (s.regret_available)
        out << "cumulative regret: " << s.final_regret << '\n';
    else
        out << "cumulative regret: n/a (squared loss only)\n";
    out << "triggers:         " << s.triggers << '\n'
        << "bits:             " << s.bits << '\n'
        << "clipped elements: " << s.clip_events << '\n'
        << "mean step time:   " << s.mean_step_time_us << " us\n"
        << "max gradient norm: " << s.max_gradient_norm << '\n'
        << "max theta norm:    " << s.max_theta_norm << '\n';
}

CompareResult compare_runs(const std::vector<config::RunConfig>& configs) {
    if (configs.empty())
        throw ConfigError("compare: no configs given");
    const auto& base = configs.front();
    for (const auto& c : configs) {
        auto differs = [&](const std::string& field, const auto& a, const auto& b) {
            if (!(a == b))
                throw MismatchedExperiment("compare: configs disagree on shared field " + field);
        };
        differs("dataset.kind", c.dataset_kind, base.dataset_kind);
        differs("dataset.path", c.dataset_path, base.dataset_path);
        differs("dataset.samples", c.dataset_samples, base.dataset_samples);
        differs("dataset.dim", c.dataset_dim, base.dataset_dim);
        differs("dataset.sigma_true", c.dataset_sigma_true, base.dataset_sigma_true);
        differs("dataset.noise_std", c.dataset_noise_std, base.dataset_noise_std);
        differs("dataset.seed", c.dataset_seed, base.dataset_seed);
        differs("n_agents", c.n_agents, base.n_agents);
        differs("graph.edge_prob", c.graph_edge_prob, base.graph_edge_prob);
        differs("graph.seed", c.graph_seed, base.graph_seed);
        differs("rf.l_count", c.rf_l_count, base.rf_l_count);
        differs("rf.sigma", c.rf_sigma, base.rf_sigma);
        differs("rf.seed", c.rf_seed, base.rf_seed);
        differs("loss.kind", c.loss_kind, base.loss_kind);
        differs("loss.lambda", c.loss_lambda, base.loss_lambda);
        differs("run.seed", c.run_seed, base.run_seed);
        differs("t_max", c.t_max, base.t_max);
    }
    CompareResult result;
    for (const auto& c : configs) {
        RunResult run = run_simulation(c);
        for (const auto& row : run.rows)
            result.rows.push_back(CompareRow{c.algorithm, row.t, row.mse_running,
                                             row.triggers_cum, row.bits_cum, row.regret_cum,
                                             row.step_time_us});
        result.summaries.push_back(run.summary);
    }
    return result;
}

void write_compare_csv(const std::vector<CompareRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("write_compare_csv: cannot open '" + path.string() + "'");
    out << "algorithm,t,mse_running,triggers_cum,bits_cum,regret_cum,step_time_us\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%.10g,%lld,%lld,%.10g,%.10g\n",
                      r.algorithm.c_str(), r.t, r.mse_running,
                      static_cast<long long>(r.triggers_cum), static_cast<long long>(r.bits_cum),
                      r.regret_cum, r.step_time_us);
        out << buf;
    }
}

} // namespace odkl::simulation
