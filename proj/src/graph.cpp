#include "spinsys/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "spinsys/error.hpp"

namespace spinsys {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 0) fail(ErrorClass::validation, "negative vertex count");
    Graph g;
    g.n_ = n;
    g.adj_.assign(n, {});
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            fail(ErrorClass::validation,
                 "edge endpoint out of range: (" + std::to_string(u) + "," + std::to_string(v) + ")");
        if (u == v) fail(ErrorClass::validation, "self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second)
            fail(ErrorClass::validation,
                 "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    g.edges_.assign(seen.begin(), seen.end());
    for (auto [u, v] : g.edges_) {
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (auto& a : g.adj_) std::sort(a.begin(), a.end());
    return g;
}

int Graph::max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
}

bool Graph::has_edge(int u, int v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

std::vector<int> Graph::distances(int v) const {
    std::vector<int> dist(n_, -1);
    std::queue<int> q;
    dist[v] = 0;
    q.push(v);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int y : adj_[x])
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                q.push(y);
            }
    }
    return dist;
}

std::vector<int> Graph::sphere(int v, int l) const {
    auto dist = distances(v);
    std::vector<int> out;
    for (int u = 0; u < n_; ++u)
        if (dist[u] == l) out.push_back(u);
    return out;
}

std::vector<int> Graph::ball(int v, int l) const {
    auto dist = distances(v);
    std::vector<int> out;
    for (int u = 0; u < n_; ++u)
        if (dist[u] >= 0 && dist[u] <= l) out.push_back(u);
    return out;
}

int Graph::diameter() const {
    int d = 0;
    for (int v = 0; v < n_; ++v)
        for (int x : distances(v)) d = std::max(d, x);
    return d;
}

} // namespace spinsys
