#include "odkl/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "odkl/errors.hpp"
#include "odkl/rng.hpp"

namespace odkl::graph {

namespace {

bool is_connected(int n, const std::vector<std::vector<int>>& neighbors) {
    if (n <= 1)
        return true;
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        int u = frontier.front();
        frontier.pop();
        for (int v : neighbors[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == n;
}

} // namespace

Topology::Topology(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 1)
        throw Error("Topology: agent count must be >= 1");
    std::set<std::pair<int, int>> unique;
    for (auto& [a, b] : edges) {
        if (a == b)
            throw Error("Topology: self-loop at agent " + std::to_string(a));
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw Error("Topology: edge endpoint out of range");
        unique.insert({std::min(a, b), std::max(a, b)});
    }
    edges_.assign(unique.begin(), unique.end());
    neighbors_.resize(n);
    for (auto [a, b] : edges_) {
        neighbors_[a].push_back(b);
        neighbors_[b].push_back(a);
    }
    for (auto& list : neighbors_)
        std::sort(list.begin(), list.end());
    if (!is_connected(n_, neighbors_))
        throw ConnectivityFailure("Topology: graph is not connected");
}

int Topology::neighbor_position(int i, int of) const {
    const auto& list = neighbors_[i];
    auto it = std::lower_bound(list.begin(), list.end(), of);
    if (it == list.end() || *it != of)
        return -1;
    return static_cast<int>(it - list.begin());
}

Eigen::MatrixXd Topology::adjacency() const {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_, n_);
    for (auto [a, b] : edges_) {
        w(a, b) = 1.0;
        w(b, a) = 1.0;
    }
    return w;
}

Eigen::MatrixXd Topology::degree_diagonal() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        d(i, i) = degree(i);
    return d;
}

Eigen::MatrixXd Topology::laplacian() const { return degree_diagonal() - adjacency(); }

Topology random_connected_graph(int n, double edge_prob, std::uint64_t seed) {
    if (n < 1)
        throw Error("random_connected_graph: n must be >= 1");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw Error("random_connected_graph: edge_prob must be in [0, 1]");
    constexpr int kRetryCap = 1000;
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(attempt));
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(edge_prob))
                    edges.emplace_back(i, j);
        try {
            return Topology(n, std::move(edges));
        } catch (const ConnectivityFailure&) {
            // resample with the next sub-seed
        }
    }
    throw ConnectivityFailure("random_connected_graph: no connected graph after " +
                              std::to_string(kRetryCap) + " attempts (n=" + std::to_string(n) +
                              ", edge_prob=" + std::to_string(edge_prob) + ")");
}

IncidencePair incidence(const Topology& topology) {
    const int n = topology.size();
    const int r = topology.edge_count();
    IncidencePair out;
    out.s_plus = Eigen::MatrixXi::Zero(n, 2 * r);
    out.s_minus = Eigen::MatrixXi::Zero(n, 2 * r);
    int col = 0;
    for (auto [i, j] : topology.edges()) {
        // arc (i, j)
        out.s_plus(i, col) = 1;
        out.s_plus(j, col) = 1;
        out.s_minus(i, col) = 1;
        out.s_minus(j, col) = -1;
        ++col;
        // arc (j, i)
        out.s_plus(j, col) = 1;
        out.s_plus(i, col) = 1;
        out.s_minus(j, col) = 1;
        out.s_minus(i, col) = -1;
        ++col;
    }
    return out;
}

Eigen::MatrixXd metropolis_weights(const Topology& topology) {
    const int n = topology.size();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (auto [a, b] : topology.edges()) {
        double v = 1.0 / (1.0 + std::max(topology.degree(a), topology.degree(b)));
        w(a, b) = v;
        w(b, a) = v;
    }
    for (int i = 0; i < n; ++i)
        w(i, i) = 1.0 - w.row(i).sum();
    return w;
}

void write_edge_list(const Topology& topology, std::ostream& out) {
    for (auto [a, b] : topology.edges())
        out << a << ' ' << b << '\n';
}

} // namespace odkl::graph
