// Finite simple undirected graphs with BFS balls and spheres.
#pragma once

#include <utility>
#include <vector>

namespace spinsys {

class Graph {
  public:
    Graph() = default;

    // Validates: vertex ids in [0,n), no self-loops, no duplicate edges.
    static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    int max_degree() const;
    bool has_edge(int u, int v) const;

    // Graph distances from v (unreachable = -1).
    std::vector<int> distances(int v) const;
    // S_l(v): vertices at distance exactly l, ascending ids.
    std::vector<int> sphere(int v, int l) const;
    // B_l(v): vertices at distance <= l, ascending ids.
    std::vector<int> ball(int v, int l) const;
    int diameter() const; // max finite pairwise distance

  private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

} // namespace spinsys
