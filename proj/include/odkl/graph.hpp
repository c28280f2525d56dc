#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace odkl::graph {

// Undirected connected communication graph. Immutable after construction.
class Topology {
  public:
    // Edges are unordered pairs; validates no self-loops, no duplicates,
    // indices in range, and connectivity.
    Topology(int n, std::vector<std::pair<int, int>> edges);

    int size() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }
    int degree(int i) const { return static_cast<int>(neighbors_[i].size()); }

    // Position of agent `of` inside neighbors(i), or -1 if not adjacent.
    int neighbor_position(int i, int of) const;

    Eigen::MatrixXd adjacency() const;
    Eigen::MatrixXd degree_diagonal() const;
    Eigen::MatrixXd laplacian() const; // D - W

  private:
    int n_;
    std::vector<std::pair<int, int>> edges_; // each (i, j) with i < j, sorted
    std::vector<std::vector<int>> neighbors_;
};

// Unsigned (S+) and signed (S-) incidence matrices, N x 2r. Columns are
// directed arcs: edges in lexicographic order, (i,j) then (j,i) per edge.
struct IncidencePair {
    Eigen::MatrixXi s_plus;
    Eigen::MatrixXi s_minus;
};

// Erdos-Renyi graph resampled (with incremented sub-seed) until connected.
// Throws ConnectivityFailure after 1000 attempts.
Topology random_connected_graph(int n, double edge_prob, std::uint64_t seed);

IncidencePair incidence(const Topology& topology);

// Symmetric doubly stochastic combine matrix: entry (i,j) = 1/(1+max(di,dj))
// on edges, diagonal absorbs the remainder.
Eigen::MatrixXd metropolis_weights(const Topology& topology);

// One "i j" pair per line, for reproducibility audits.
void write_edge_list(const Topology& topology, std::ostream& out);

} // namespace odkl::graph
