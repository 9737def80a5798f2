#include "spinsys/gen.hpp"

#include <algorithm>
#include <set>

#include "spinsys/dynamics.hpp"
#include "spinsys/error.hpp"

namespace spinsys {

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Graph::from_edges(n, std::move(e));
}

Graph cycle_graph(int n) {
    if (n < 3) fail(ErrorClass::usage, "cycle needs n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    e.push_back({n - 1, 0});
    return Graph::from_edges(n, std::move(e));
}

Graph star_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < n; ++i) e.push_back({0, i});
    return Graph::from_edges(n, std::move(e));
}

Graph random_connected_graph(int n, int max_degree, int extra_edges, uint64_t seed) {
    if (n < 1 || max_degree < 1) fail(ErrorClass::usage, "bad generator arguments");
    if (n > 1 && max_degree < 2 && n > 2) fail(ErrorClass::usage, "degree cap too small for a tree");
    SplitMix64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    rng.next();
    std::vector<int> deg(n, 0);
    std::set<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        int u = -1;
        for (int tries = 0; tries < 64 * n; ++tries) {
            int cand = static_cast<int>(rng.next_below(v));
            if (deg[cand] < max_degree - (v < n - 1 ? 1 : 0) || deg[cand] < max_degree) {
                u = cand;
                break;
            }
        }
        if (u < 0) {
            for (int cand = 0; cand < v && u < 0; ++cand)
                if (deg[cand] < max_degree) u = cand;
        }
        if (u < 0) fail(ErrorClass::init, "attachment failed under degree cap");
        edges.insert({std::min(u, v), std::max(u, v)});
        ++deg[u];
        ++deg[v];
    }
    int added = 0, tries = 0;
    while (added < extra_edges && tries < 256 * (extra_edges + 1)) {
        ++tries;
        int a = static_cast<int>(rng.next_below(n));
        int b = static_cast<int>(rng.next_below(n));
        if (a == b) continue;
        if (deg[a] >= max_degree || deg[b] >= max_degree) continue;
        auto e = std::make_pair(std::min(a, b), std::max(a, b));
        if (edges.count(e)) continue;
        edges.insert(e);
        ++deg[a];
        ++deg[b];
        ++added;
    }
    return Graph::from_edges(n, {edges.begin(), edges.end()});
}

} // namespace spinsys
