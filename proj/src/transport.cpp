#include "spinsys/transport.hpp"

#include <algorithm>
#include <unordered_map>

#include "spinsys/error.hpp"

namespace spinsys {

namespace {

struct Arc {
    int i, j;
    bool operator==(const Arc& o) const { return i == o.i && j == o.j; }
    bool operator<(const Arc& o) const { return i != o.i ? i < o.i : j < o.j; }
};

} // namespace

Rat transport_min_cost(const std::vector<Rat>& supply_in, const std::vector<Rat>& demand_in,
                       const std::vector<std::vector<int>>& cost_in) {
    // drop zero rows/columns
    std::vector<int> rows, cols;
    Rat stot = 0, dtot = 0;
    for (size_t i = 0; i < supply_in.size(); ++i) {
        if (supply_in[i] < 0) fail(ErrorClass::usage, "negative supply");
        if (supply_in[i] > 0) rows.push_back(static_cast<int>(i));
        stot += supply_in[i];
    }
    for (size_t j = 0; j < demand_in.size(); ++j) {
        if (demand_in[j] < 0) fail(ErrorClass::usage, "negative demand");
        if (demand_in[j] > 0) cols.push_back(static_cast<int>(j));
        dtot += demand_in[j];
    }
    if (stot != dtot) fail(ErrorClass::usage, "transport: supply/demand mismatch");
    int m = static_cast<int>(rows.size()), n = static_cast<int>(cols.size());
    if (m == 0 || n == 0) return Rat(0);

    std::vector<Rat> a(m), b(n);
    for (int i = 0; i < m; ++i) a[i] = supply_in[rows[i]];
    for (int j = 0; j < n; ++j) b[j] = demand_in[cols[j]];
    auto cost = [&](int i, int j) -> long long { return cost_in[rows[i]][cols[j]]; };

    // northwest corner start; flows live only on basis arcs
    std::vector<Arc> basis;
    std::unordered_map<long long, Rat> flow;
    auto key = [n](int i, int j) { return static_cast<long long>(i) * n + j; };
    {
        std::vector<Rat> ra = a, rb = b;
        int i = 0, j = 0;
        while (true) {
            Rat f = std::min(ra[i], rb[j]);
            basis.push_back({i, j});
            flow[key(i, j)] = f;
            ra[i] -= f;
            rb[j] -= f;
            if (i == m - 1 && j == n - 1) break;
            if (ra[i] == 0 && i < m - 1)
                ++i;
            else
                ++j;
        }
    }

    const long long max_iters = 64LL * (m + n) * (m + n) + 4096;
    for (long long iter = 0;; ++iter) {
        if (iter > max_iters) fail(ErrorClass::solver, "transportation simplex iteration cap hit");

        // potentials from the basis tree (integer since costs are integer)
        std::vector<std::vector<std::pair<int, int>>> adj(m + n); // (other node, arc idx)
        for (size_t t = 0; t < basis.size(); ++t) {
            adj[basis[t].i].push_back({m + basis[t].j, static_cast<int>(t)});
            adj[m + basis[t].j].push_back({basis[t].i, static_cast<int>(t)});
        }
        std::vector<long long> pot(m + n, 0);
        std::vector<int> seen(m + n, 0), parent_arc(m + n, -1), parent(m + n, -1);
        std::vector<int> stack = {0};
        seen[0] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto [y, t] : adj[x]) {
                if (seen[y]) continue;
                seen[y] = 1;
                long long c = cost(basis[t].i, basis[t].j);
                pot[y] = x < m ? c - pot[x] : c - pot[x]; // u_i + v_j = c
                parent_arc[y] = t;
                parent[y] = x;
                stack.push_back(y);
            }
        }

        // entering arc: smallest (i,j) with negative reduced cost
        int ei = -1, ej = -1;
        for (int i = 0; i < m && ei < 0; ++i)
            for (int j = 0; j < n; ++j) {
                if (cost(i, j) - pot[i] - pot[m + j] < 0) {
                    ei = i;
                    ej = j;
                    break;
                }
            }
        if (ei < 0) break;

        // cycle: tree path from row ei to col ej, plus the entering arc
        std::vector<int> par(m + n, -2), par_arc(m + n, -1);
        std::vector<int> st = {ei};
        par[ei] = -1;
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            if (x == m + ej) break;
            for (auto [y, t] : adj[x])
                if (par[y] == -2) {
                    par[y] = x;
                    par_arc[y] = t;
                    st.push_back(y);
                }
        }
        if (par[m + ej] == -2) fail(ErrorClass::solver, "transport basis not spanning");
        std::vector<int> path_arcs;
        for (int x = m + ej; x != ei; x = par[x]) path_arcs.push_back(par_arc[x]);
        // path_arcs runs col ej -> ... -> row ei; signs alternate -,+,-,...
        Rat theta = -1;
        int leave = -1;
        for (size_t s = 0; s < path_arcs.size(); s += 2) {
            const Arc& arc = basis[path_arcs[s]];
            const Rat& f = flow[key(arc.i, arc.j)];
            if (theta < 0 || f < theta ||
                (f == theta && leave >= 0 && arc < basis[leave])) {
                theta = f;
                leave = static_cast<int>(path_arcs[s]);
            }
        }
        if (leave < 0) fail(ErrorClass::solver, "transport pivot without leaving arc");

        flow[key(ei, ej)] += theta;
        for (size_t s = 0; s < path_arcs.size(); ++s) {
            const Arc& arc = basis[path_arcs[s]];
            if (s % 2 == 0)
                flow[key(arc.i, arc.j)] -= theta;
            else
                flow[key(arc.i, arc.j)] += theta;
        }
        basis[leave] = {ei, ej};
    }

    Rat total = 0;
    for (const Arc& arc : basis) total += flow[key(arc.i, arc.j)] * cost(arc.i, arc.j);
    return total;
}

} // namespace spinsys
