#include "odkl/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "odkl/errors.hpp"

namespace odkl::config {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

std::int64_t to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an unsigned integer, got '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

RunConfig parse(const std::string& text) {
    RunConfig c;
    std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
        {"dataset.kind", [&](const std::string&, const std::string& v) { c.dataset_kind = v; }},
        {"dataset.path", [&](const std::string&, const std::string& v) { c.dataset_path = v; }},
        {"dataset.label_column",
         [&](const std::string&, const std::string& v) { c.dataset_label_column = v; }},
        {"dataset.delimiter",
         [&](const std::string& k, const std::string& v) {
             if (v.size() != 1)
                 throw ConfigError(k + ": expected a single character, got '" + v + "'");
             c.dataset_delimiter = v[0];
         }},
        {"dataset.samples",
         [&](const std::string& k, const std::string& v) {
             c.dataset_samples = static_cast<int>(to_int(k, v));
         }},
        {"dataset.dim",
         [&](const std::string& k, const std::string& v) {
             c.dataset_dim = static_cast<int>(to_int(k, v));
         }},
        {"dataset.sigma_true",
         [&](const std::string& k, const std::string& v) { c.dataset_sigma_true = to_double(k, v); }},
        {"dataset.noise_std",
         [&](const std::string& k, const std::string& v) { c.dataset_noise_std = to_double(k, v); }},
        {"dataset.seed",
         [&](const std::string& k, const std::string& v) { c.dataset_seed = to_u64(k, v); }},
        {"algorithm", [&](const std::string&, const std::string& v) { c.algorithm = v; }},
        {"n_agents",
         [&](const std::string& k, const std::string& v) {
             c.n_agents = static_cast<int>(to_int(k, v));
         }},
        {"graph.edge_prob",
         [&](const std::string& k, const std::string& v) { c.graph_edge_prob = to_double(k, v); }},
        {"graph.seed",
         [&](const std::string& k, const std::string& v) { c.graph_seed = to_u64(k, v); }},
        {"rf.l_count",
         [&](const std::string& k, const std::string& v) {
             c.rf_l_count = static_cast<int>(to_int(k, v));
         }},
        {"rf.sigma", [&](const std::string& k, const std::string& v) { c.rf_sigma = to_double(k, v); }},
        {"rf.seed", [&](const std::string& k, const std::string& v) { c.rf_seed = to_u64(k, v); }},
        {"loss.kind", [&](const std::string&, const std::string& v) { c.loss_kind = v; }},
        {"loss.lambda",
         [&](const std::string& k, const std::string& v) { c.loss_lambda = to_double(k, v); }},
        {"hyper.rho",
         [&](const std::string& k, const std::string& v) { c.hyper_rho = to_double(k, v); }},
        {"hyper.eta_schedule",
         [&](const std::string&, const std::string& v) { c.hyper_eta_schedule = v; }},
        {"hyper.eta0",
         [&](const std::string& k, const std::string& v) { c.hyper_eta0 = to_double(k, v); }},
        {"censor.enabled",
         [&](const std::string& k, const std::string& v) { c.censor_enabled = to_bool(k, v); }},
        {"censor.alpha",
         [&](const std::string& k, const std::string& v) { c.censor_alpha = to_double(k, v); }},
        {"censor.beta",
         [&](const std::string& k, const std::string& v) { c.censor_beta = to_double(k, v); }},
        {"quantizer.enabled",
         [&](const std::string& k, const std::string& v) { c.quantizer_enabled = to_bool(k, v); }},
        {"quantizer.bits",
         [&](const std::string& k, const std::string& v) {
             c.quantizer_bits = static_cast<int>(to_int(k, v));
         }},
        {"quantizer.range",
         [&](const std::string& k, const std::string& v) { c.quantizer_range = to_double(k, v); }},
        {"t_max",
         [&](const std::string& k, const std::string& v) { c.t_max = static_cast<int>(to_int(k, v)); }},
        {"output", [&](const std::string&, const std::string& v) { c.output = v; }},
        {"run.seed", [&](const std::string& k, const std::string& v) { c.run_seed = to_u64(k, v); }},
        {"timing.enabled",
         [&](const std::string& k, const std::string& v) { c.timing_enabled = to_bool(k, v); }},
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                              line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError(key + ": unknown config key");
        it->second(key, value);
    }
    return c;
}

RunConfig parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("config: cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string serialize(const RunConfig& c) {
    std::ostringstream out;
    out << "dataset.kind=" << c.dataset_kind << '\n';
    if (c.dataset_kind == "csv") {
        out << "dataset.path=" << c.dataset_path << '\n';
        out << "dataset.label_column=" << c.dataset_label_column << '\n';
        out << "dataset.delimiter=" << c.dataset_delimiter << '\n';
    } else {
        out << "dataset.samples=" << c.dataset_samples << '\n';
        out << "dataset.dim=" << c.dataset_dim << '\n';
        out << "dataset.sigma_true=" << format_double(c.dataset_sigma_true) << '\n';
        out << "dataset.noise_std=" << format_double(c.dataset_noise_std) << '\n';
        out << "dataset.seed=" << c.dataset_seed << '\n';
    }
    out << "algorithm=" << c.algorithm << '\n';
    out << "n_agents=" << c.n_agents << '\n';
    out << "graph.edge_prob=" << format_double(c.graph_edge_prob) << '\n';
    out << "graph.seed=" << c.graph_seed << '\n';
    out << "rf.l_count=" << c.rf_l_count << '\n';
    out << "rf.sigma=" << format_double(c.rf_sigma) << '\n';
    out << "rf.seed=" << c.rf_seed << '\n';
    out << "loss.kind=" << c.loss_kind << '\n';
    out << "loss.lambda=" << format_double(c.loss_lambda) << '\n';
    out << "hyper.rho=" << format_double(c.hyper_rho) << '\n';
    out << "hyper.eta_schedule=" << c.hyper_eta_schedule << '\n';
    out << "hyper.eta0=" << format_double(c.hyper_eta0) << '\n';
    out << "censor.enabled=" << (c.censor_enabled ? "true" : "false") << '\n';
    out << "censor.alpha=" << format_double(c.censor_alpha) << '\n';
    out << "censor.beta=" << format_double(c.censor_beta) << '\n';
    out << "quantizer.enabled=" << (c.quantizer_enabled ? "true" : "false") << '\n';
    out << "quantizer.bits=" << c.quantizer_bits << '\n';
    out << "quantizer.range=" << format_double(c.quantizer_range) << '\n';
    out << "t_max=" << c.t_max << '\n';
    out << "output=" << c.output << '\n';
    out << "run.seed=" << c.run_seed << '\n';
    out << "timing.enabled=" << (c.timing_enabled ? "true" : "false") << '\n';
    return out.str();
}

void validate(const RunConfig& c) {
    if (c.dataset_kind != "synthetic" && c.dataset_kind != "csv")
        throw ConfigError("dataset.kind: must be synthetic or csv, got '" + c.dataset_kind + "'");
    if (c.dataset_kind == "csv" && c.dataset_path.empty())
        throw ConfigError("dataset.path: required when dataset.kind=csv");
    if (c.dataset_kind == "synthetic") {
        if (c.dataset_samples < 1)
            throw ConfigError("dataset.samples: must be >= 1");
        if (c.dataset_dim < 1)
            throw ConfigError("dataset.dim: must be >= 1");
        if (!(c.dataset_sigma_true > 0.0))
            throw ConfigError("dataset.sigma_true: must be > 0");
        if (c.dataset_noise_std < 0.0)
            throw ConfigError("dataset.noise_std: must be >= 0");
    }
    engine::Algorithm algo;
    try {
        algo = engine::algorithm_from_string(c.algorithm);
    } catch (const ConfigError&) {
        throw ConfigError("algorithm: must be one of odkla, qc-odkla, rff-dokl, dokl; got '" +
                          c.algorithm + "'");
    }
    if (c.n_agents < 1)
        throw ConfigError("n_agents: must be >= 1");
    if (c.graph_edge_prob < 0.0 || c.graph_edge_prob > 1.0)
        throw ConfigError("graph.edge_prob: must be in [0, 1]");
    if (c.rf_l_count < 1)
        throw ConfigError("rf.l_count: must be >= 1");
    if (!(c.rf_sigma > 0.0))
        throw ConfigError("rf.sigma: must be > 0");
    losses::loss_kind_from_string(c.loss_kind);
    if (c.loss_lambda < 0.0)
        throw ConfigError("loss.lambda: must be >= 0");
    if (!(c.hyper_rho > 0.0))
        throw ConfigError("hyper.rho: must be > 0");
    engine::eta_kind_from_string(c.hyper_eta_schedule);
    if (!(c.hyper_eta0 > 0.0))
        throw ConfigError("hyper.eta0: must be > 0");
    if (c.censor_enabled) {
        if (algo != engine::Algorithm::qc_odkla)
            throw ConfigError("censor.enabled: censoring is only valid for algorithm=qc-odkla");
        if (!(c.censor_alpha > 0.0))
            throw ConfigError("censor.alpha: must be > 0");
        if (!(c.censor_beta > 0.0 && c.censor_beta < 1.0))
            throw ConfigError("censor.beta: must be in (0, 1)");
    }
    if (c.quantizer_enabled) {
        if (algo != engine::Algorithm::qc_odkla)
            throw ConfigError("quantizer.enabled: quantization is only valid for algorithm=qc-odkla");
        if (c.quantizer_bits < 1)
            throw ConfigError("quantizer.bits: must be >= 1");
        if (!(c.quantizer_range > 0.0))
            throw ConfigError("quantizer.range: must be > 0");
    }
    if (algo == engine::Algorithm::dokl && c.loss_kind != "squared")
        throw ConfigError("loss.kind: dokl requires the squared loss");
    if (c.t_max < 0)
        throw ConfigError("t_max: must be >= 0");
}

losses::LossSpec loss_spec(const RunConfig& c) {
    losses::LossSpec spec;
    spec.kind = losses::loss_kind_from_string(c.loss_kind);
    spec.lambda = c.loss_lambda;
    spec.n_agents = c.n_agents;
    return spec;
}

engine::HyperParams hyper_params(const RunConfig& c) {
    engine::HyperParams hp;
    hp.rho = c.hyper_rho;
    hp.eta.kind = engine::eta_kind_from_string(c.hyper_eta_schedule);
    hp.eta.eta0 = c.hyper_eta0;
    hp.loss = loss_spec(c);
    hp.censor.enabled = c.censor_enabled;
    hp.censor.alpha = c.censor_alpha;
    hp.censor.beta = c.censor_beta;
    if (c.quantizer_enabled)
        hp.quantizer = comm::QuantizerSpec(c.quantizer_bits, -c.quantizer_range, c.quantizer_range);
    return hp;
}

engine::Algorithm algorithm(const RunConfig& c) { return engine::algorithm_from_string(c.algorithm); }

std::uint64_t config_hash(const RunConfig& c) {
    const std::string s = serialize(c);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace odkl::config
