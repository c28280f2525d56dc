#include "odkl/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "odkl/errors.hpp"
#include "odkl/rng.hpp"

namespace odkl::data {

namespace {

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delimiter))
        out.push_back(field);
    if (!line.empty() && line.back() == delimiter)
        out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty())
        return std::nullopt;
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        return std::nullopt;
    return value;
}

} // namespace

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column,
                 char delimiter) {
    std::ifstream in(path);
    if (!in)
        throw IoError("load_csv: cannot open '" + path.string() + "'");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty())
            lines.push_back(line);
    }
    if (lines.empty())
        throw EmptyDataset("load_csv: '" + path.string() + "' has no rows");

    // Header detection: a first row with any non-numeric field.
    auto first_fields = split(lines[0], delimiter);
    bool has_header = false;
    for (const auto& f : first_fields)
        if (!parse_double(f))
            has_header = true;
    std::vector<std::string> header;
    if (has_header)
        for (const auto& f : first_fields)
            header.push_back(trim(f));

    const std::size_t n_cols = first_fields.size();
    if (n_cols < 2)
        throw ParseError("load_csv: need at least one feature column and a label column");

    int label_idx;
    if (std::holds_alternative<int>(label_column)) {
        label_idx = std::get<int>(label_column);
        if (label_idx < 0)
            label_idx = static_cast<int>(n_cols) + label_idx;
    } else {
        const auto& name = std::get<std::string>(label_column);
        if (!has_header)
            throw ParseError("load_csv: label column '" + name + "' requested but file has no header");
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ParseError("load_csv: label column '" + name + "' not found in header");
        label_idx = static_cast<int>(it - header.begin());
    }
    if (label_idx < 0 || label_idx >= static_cast<int>(n_cols))
        throw ParseError("load_csv: label column index out of range");

    Dataset ds;
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (static_cast<int>(c) == label_idx)
            continue;
        ds.feature_names.push_back(has_header ? header[c] : "x" + std::to_string(c));
    }

    std::vector<std::vector<double>> rows;
    for (std::size_t r = has_header ? 1 : 0; r < lines.size(); ++r) {
        auto fields = split(lines[r], delimiter);
        if (fields.size() != n_cols) {
            ++ds.dropped_rows;
            continue;
        }
        std::vector<double> row;
        row.reserve(n_cols);
        bool ok = true;
        for (const auto& f : fields) {
            auto v = parse_double(f);
            if (!v) {
                ok = false;
                break;
            }
            row.push_back(*v);
        }
        if (!ok) {
            ++ds.dropped_rows;
            continue;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw EmptyDataset("load_csv: '" + path.string() + "' has no parseable rows");

    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(n_cols - 1);
    ds.features.resize(n, d);
    ds.labels.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        Eigen::Index k = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (static_cast<int>(c) == label_idx)
                ds.labels(r) = rows[r][c];
            else
                ds.features(r, k++) = rows[r][c];
        }
    }
    return ds;
}

Dataset normalize_minmax(Dataset dataset) {
    if (dataset.rows() == 0)
        throw EmptyDataset("normalize_minmax: empty dataset");
    for (Eigen::Index c = 0; c < dataset.dim(); ++c) {
        const double lo = dataset.features.col(c).minCoeff();
        const double hi = dataset.features.col(c).maxCoeff();
        if (hi > lo)
            dataset.features.col(c) = (dataset.features.col(c).array() - lo) / (hi - lo);
        else
            dataset.features.col(c).setZero();
    }
    return dataset;
}

AgentStreams shuffle_partition(const Dataset& dataset, int n_agents, std::uint64_t seed) {
    if (n_agents < 1)
        throw Error("shuffle_partition: n_agents must be >= 1");
    const auto total = dataset.rows();
    if (total < n_agents)
        throw TooFewSamples("shuffle_partition: " + std::to_string(total) + " rows for " +
                            std::to_string(n_agents) + " agents");
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(total));
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    for (std::size_t i = perm.size() - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.below(i + 1)]);

    const auto per_agent = total / n_agents; // remainder rows dropped
    AgentStreams streams;
    streams.features.resize(n_agents);
    streams.labels.resize(n_agents);
    for (int a = 0; a < n_agents; ++a) {
        streams.features[a].resize(per_agent, dataset.dim());
        streams.labels[a].resize(per_agent);
        for (Eigen::Index t = 0; t < per_agent; ++t) {
            const Eigen::Index src = perm[static_cast<std::size_t>(a * per_agent + t)];
            streams.features[a].row(t) = dataset.features.row(src);
            streams.labels[a](t) = dataset.labels(src);
        }
    }
    return streams;
}

double SynthFunction::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return weights.dot(features::map(basis, x));
}

SynthResult synthesize(int n_samples, int dim, double sigma_true, double noise_std,
                       std::uint64_t seed) {
    if (n_samples < 1 || dim < 1)
        throw Error("synthesize: sizes must be positive");
    constexpr int kHiddenFrequencies = 64;
    SynthResult out;
    out.truth.basis =
        features::sample_basis(kHiddenFrequencies, dim, sigma_true, Rng::stream(seed, 1).next_u64());
    Rng weight_rng = Rng::stream(seed, 2);
    out.truth.weights.resize(2 * kHiddenFrequencies);
    for (Eigen::Index i = 0; i < out.truth.weights.size(); ++i)
        out.truth.weights(i) = weight_rng.normal();

    Rng x_rng = Rng::stream(seed, 3);
    Rng noise_rng = Rng::stream(seed, 4);
    out.dataset.features.resize(n_samples, dim);
    out.dataset.labels.resize(n_samples);
    for (int r = 0; r < n_samples; ++r) {
        for (int c = 0; c < dim; ++c)
            out.dataset.features(r, c) = x_rng.uniform01();
        const double f = out.truth(out.dataset.features.row(r).transpose());
        out.dataset.labels(r) = f + noise_std * noise_rng.normal();
    }
    for (int c = 0; c < dim; ++c)
        out.dataset.feature_names.push_back("x" + std::to_string(c));
    return out;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("write_csv: cannot open '" + path.string() + "' for writing");
    for (Eigen::Index c = 0; c < dataset.dim(); ++c) {
        const std::string name = c < static_cast<Eigen::Index>(dataset.feature_names.size())
                                     ? dataset.feature_names[static_cast<std::size_t>(c)]
                                     : "x" + std::to_string(c);
        out << name << ',';
    }
    out << "y\n";
    char buf[64];
    for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
        for (Eigen::Index c = 0; c < dataset.dim(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", dataset.features(r, c));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", dataset.labels(r));
        out << buf << '\n';
    }
}

} // namespace odkl::data
