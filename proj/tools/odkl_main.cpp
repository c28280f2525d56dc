#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odkl/config.hpp"
#include "odkl/data.hpp"
#include "odkl/errors.hpp"
#include "odkl/metrics.hpp"
#include "odkl/simulation.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online decentralized kernel learning simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run one experiment from a config file");
    std::string run_config_path;
    std::string run_out;
    std::string dump_graph_path;
    std::string trace_path;
    run->add_option("--config", run_config_path, "Config file (key=value lines)")->required();
    run->add_option("--out", run_out, "Output CSV path (overrides config `output`)");
    run->add_option("--dump-graph", dump_graph_path, "Write the sampled edge list to this file");
    run->add_option("--trace", trace_path, "Write a per-transmission trace CSV to this file");

    // compare
    auto* compare = app.add_subcommand("compare", "Run several configs and merge the curves");
    std::string compare_configs;
    std::string compare_out;
    compare->add_option("--configs", compare_configs, "Comma-separated config files")->required();
    compare->add_option("--out", compare_out, "Merged CSV path")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic regression dataset");
    int synth_samples = 10000;
    int synth_dim = 5;
    std::uint64_t synth_seed = 1;
    double synth_sigma = 0.5;
    double synth_noise = 0.1;
    std::string synth_out;
    synth->add_option("--samples", synth_samples, "Number of rows")->required();
    synth->add_option("--dim", synth_dim, "Input dimension")->required();
    synth->add_option("--seed", synth_seed, "Generator seed")->required();
    synth->add_option("--out", synth_out, "Output CSV path")->required();
    synth->add_option("--sigma-true", synth_sigma, "Bandwidth of the hidden function");
    synth->add_option("--noise-std", synth_noise, "Label noise standard deviation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            odkl::config::RunConfig cfg = odkl::config::parse_file(run_config_path);
            if (!run_out.empty())
                cfg.output = run_out;
            odkl::config::validate(cfg);

            odkl::simulation::RunHooks hooks;
            std::ofstream graph_out, trace_out;
            if (!dump_graph_path.empty()) {
                graph_out.open(dump_graph_path);
                if (!graph_out)
                    throw odkl::IoError("cannot open '" + dump_graph_path + "'");
                hooks.graph_dump = &graph_out;
            }
            if (!trace_path.empty()) {
                trace_out.open(trace_path);
                if (!trace_out)
                    throw odkl::IoError("cannot open '" + trace_path + "'");
                trace_out << "t,sender,bits,clipped_count\n";
                hooks.trace = &trace_out;
            }

            auto result = odkl::simulation::run_simulation(cfg, hooks);
            odkl::metrics::write_csv(result.rows, cfg.output);
            odkl::simulation::write_summary(result.summary, std::cout);
            std::cout << "results written to " << cfg.output << '\n';
        } else if (compare->parsed()) {
            std::vector<odkl::config::RunConfig> cfgs;
            for (const auto& path : split_list(compare_configs))
                cfgs.push_back(odkl::config::parse_file(path));
            for (const auto& c : cfgs)
                odkl::config::validate(c);
            auto result = odkl::simulation::compare_runs(cfgs);
            odkl::simulation::write_compare_csv(result.rows, compare_out);
            for (const auto& s : result.summaries) {
                odkl::simulation::write_summary(s, std::cout);
                std::cout << '\n';
            }
            std::cout << "comparison written to " << compare_out << '\n';
        } else if (synth->parsed()) {
            auto result =
                odkl::data::synthesize(synth_samples, synth_dim, synth_sigma, synth_noise, synth_seed);
            odkl::data::write_csv(result.dataset, synth_out);
            std::cout << "wrote " << result.dataset.rows() << " rows to " << synth_out << '\n';
        }
    } catch (const odkl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const odkl::MismatchedExperiment& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
