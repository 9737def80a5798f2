#include "spinsys/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <queue>
#include <set>

#include "spinsys/error.hpp"
#include "spinsys/transport.hpp"

namespace spinsys {

int OracleCaps::resolved_max_free(int q) const {
    if (max_free >= 0) return max_free;
    return static_cast<int>(std::floor(20.0 * std::log(2.0) / std::log(static_cast<double>(q))));
}

std::vector<int> diff_vertices(const Pinning& a, const Pinning& b) {
    if (a.domain() != b.domain()) fail(ErrorClass::usage, "pinnings on different domains");
    std::vector<int> out;
    const auto& ia = a.items();
    const auto& ib = b.items();
    for (size_t i = 0; i < ia.size(); ++i)
        if (ia[i].second != ib[i].second) out.push_back(ia[i].first);
    return out;
}

Oracle::Oracle(const SpinModel& m, OracleCaps caps) : m_(&m), caps_(caps) {}

void Oracle::check_cap(size_t total_free) const {
    size_t cap = static_cast<size_t>(caps_.resolved_max_free(m_->q));
    if (total_free > cap)
        fail(ErrorClass::size_cap, "enumeration over " + std::to_string(total_free) +
                                       " free vertices exceeds cap " + std::to_string(cap));
}

std::vector<std::vector<int>> Oracle::free_components(const Pinning& pin) const {
    int n = m_->n();
    std::vector<char> free_v(n, 1);
    for (auto& [v, c] : pin.items()) free_v[v] = 0;
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> comps;
    for (int v = 0; v < n; ++v) {
        if (!free_v[v] || seen[v]) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(v);
        seen[v] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            comp.push_back(x);
            for (int y : m_->graph.neighbors(x))
                if (free_v[y] && !seen[y]) {
                    seen[y] = 1;
                    q.push(y);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

namespace {

// Enumeration scaffold shared by the counting and weighted paths: BFS order
// over the component, effective per-vertex weights folding in the pinned
// boundary, and the within-component edges to earlier-ordered vertices.
struct CompWork {
    std::vector<int> order;
    std::vector<std::vector<Rat>> eff;            // [pos][colour]
    std::vector<std::vector<int>> earlier;        // [pos] -> earlier positions adjacent
};

CompWork prepare(const SpinModel& m, const Pinning& pin, const std::vector<int>& comp) {
    CompWork w;
    std::set<int> in_comp(comp.begin(), comp.end());
    std::vector<char> vis(m.n(), 0);
    std::queue<int> q;
    q.push(comp[0]);
    vis[comp[0]] = 1;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        w.order.push_back(x);
        for (int y : m.graph.neighbors(x))
            if (in_comp.count(y) && !vis[y]) {
                vis[y] = 1;
                q.push(y);
            }
    }
    int k = static_cast<int>(w.order.size());
    std::vector<int> pos(m.n(), -1);
    for (int i = 0; i < k; ++i) pos[w.order[i]] = i;
    w.eff.resize(k);
    w.earlier.resize(k);
    for (int i = 0; i < k; ++i) {
        int v = w.order[i];
        w.eff[i].resize(m.q);
        for (int c = 0; c < m.q; ++c) {
            Rat e = m.aV(v, c);
            for (int u : m.graph.neighbors(v)) {
                if (e == 0) break;
                auto cu = pin.get(u);
                if (cu) e *= m.aE(c, *cu);
            }
            w.eff[i][c] = e;
        }
        for (int u : m.graph.neighbors(v))
            if (pos[u] >= 0 && pos[u] < i) w.earlier[i].push_back(pos[u]);
    }
    return w;
}

struct CountEnum {
    const SpinModel& m;
    const CompWork& w;
    bool marg;
    std::vector<int> col;
    std::vector<std::vector<unsigned long long>> acc;
    std::vector<std::vector<char>> eff01;

    unsigned long long run() {
        int k = static_cast<int>(w.order.size());
        col.assign(k, -1);
        eff01.resize(k);
        for (int i = 0; i < k; ++i) {
            eff01[i].resize(m.q);
            for (int c = 0; c < m.q; ++c) eff01[i][c] = w.eff[i][c] != 0;
        }
        if (marg) acc.assign(k, std::vector<unsigned long long>(m.q, 0));
        return rec(0);
    }

    unsigned long long rec(int i) {
        if (i == static_cast<int>(w.order.size())) return 1;
        unsigned long long total = 0;
        for (int c = 0; c < m.q; ++c) {
            if (!eff01[i][c]) continue;
            bool ok = true;
            for (int j : w.earlier[i])
                if (m.aE(c, col[j]) == 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            col[i] = c;
            unsigned long long sub = rec(i + 1);
            col[i] = -1;
            if (marg) acc[i][c] += sub;
            total += sub;
        }
        return total;
    }
};

struct WeightEnum {
    const SpinModel& m;
    const CompWork& w;
    bool marg;
    std::vector<int> col;
    std::vector<std::vector<Rat>> acc;

    Rat run() {
        int k = static_cast<int>(w.order.size());
        col.assign(k, -1);
        if (marg) acc.assign(k, std::vector<Rat>(m.q, Rat(0)));
        return rec(0, Rat(1));
    }

    Rat rec(int i, const Rat& prefix) {
        if (i == static_cast<int>(w.order.size())) return Rat(1);
        Rat total = 0;
        for (int c = 0; c < m.q; ++c) {
            Rat f = w.eff[i][c];
            if (f == 0) continue;
            for (int j : w.earlier[i]) {
                f *= m.aE(c, col[j]);
                if (f == 0) break;
            }
            if (f == 0) continue;
            col[i] = c;
            Rat sub = rec(i + 1, prefix * f);
            col[i] = -1;
            if (marg && sub != 0) acc[i][c] += prefix * f * sub;
            total += f * sub;
        }
        return total;
    }
};

} // namespace

Oracle::CompResult Oracle::enumerate_component(const Pinning& pin, const std::vector<int>& comp,
                                               bool want_marginals) const {
    CompWork w = prepare(*m_, pin, comp);
    CompResult res;
    int k = static_cast<int>(w.order.size());
    if (m_->hard01()) {
        CountEnum e{*m_, w, want_marginals, {}, {}, {}};
        res.z = Rat(e.run());
        if (want_marginals) {
            res.acc.assign(k, std::vector<Rat>(m_->q, Rat(0)));
            for (int i = 0; i < k; ++i)
                for (int c = 0; c < m_->q; ++c) res.acc[i][c] = Rat(e.acc[i][c]);
        }
    } else {
        WeightEnum e{*m_, w, want_marginals, {}, {}};
        res.z = e.run();
        if (want_marginals) res.acc = std::move(e.acc);
    }
    if (want_marginals) {
        // rearrange acc by comp-vertex order for the caller
        std::vector<std::vector<Rat>> by_vertex(k);
        for (int i = 0; i < k; ++i) {
            auto it = std::lower_bound(comp.begin(), comp.end(), w.order[i]);
            by_vertex[it - comp.begin()] = std::move(res.acc[i]);
        }
        res.acc = std::move(by_vertex);
    }
    return res;
}

Rat Oracle::component_z(const Pinning& pin, const std::vector<int>& comp) const {
    // key: component vertices plus the values pinned on its boundary
    std::string key;
    key.reserve(comp.size() * 4 + 64);
    auto push_int = [&key](int x) {
        char buf[4];
        std::memcpy(buf, &x, 4);
        key.append(buf, 4);
    };
    for (int v : comp) push_int(v);
    push_int(-1);
    std::set<int> in_comp(comp.begin(), comp.end());
    std::set<std::pair<int, int>> boundary;
    for (int v : comp)
        for (int u : m_->graph.neighbors(v)) {
            auto cu = pin.get(u);
            if (cu) boundary.insert({u, *cu});
        }
    for (auto [u, c] : boundary) {
        push_int(u);
        push_int(c);
    }
    auto it = comp_cache_.find(key);
    if (it != comp_cache_.end()) return it->second;
    Rat z = enumerate_component(pin, comp, false).z;
    comp_cache_.emplace(std::move(key), z);
    return z;
}

Rat Oracle::Z(const Pinning& pin) const {
    auto comps = free_components(pin);
    size_t total = 0;
    for (auto& c : comps) total += c.size();
    check_cap(total);
    Rat z = 1;
    for (auto& comp : comps) {
        z *= component_z(pin, comp);
        if (z == 0) break;
    }
    return z;
}

std::vector<Rat> Oracle::marginal(const Pinning& pin, int v) const {
    if (pin.contains(v)) fail(ErrorClass::usage, "marginal at pinned vertex");
    auto comps = free_components(pin);
    for (auto& comp : comps) {
        if (!std::binary_search(comp.begin(), comp.end(), v)) continue;
        check_cap(comp.size());
        auto res = enumerate_component(pin, comp, true);
        if (res.z == 0) fail(ErrorClass::non_permissive, "conditional partition function is zero");
        int idx = static_cast<int>(std::lower_bound(comp.begin(), comp.end(), v) - comp.begin());
        std::vector<Rat> out(m_->q);
        for (int c = 0; c < m_->q; ++c) out[c] = res.acc[idx][c] / res.z;
        return out;
    }
    fail(ErrorClass::usage, "vertex not found in any free component");
}

std::vector<std::vector<Rat>> Oracle::marginal_table(const Pinning& pin) const {
    auto comps = free_components(pin);
    size_t total = 0;
    for (auto& c : comps) total += c.size();
    check_cap(total);
    std::vector<std::vector<Rat>> table(m_->n());
    for (auto& comp : comps) {
        auto res = enumerate_component(pin, comp, true);
        if (res.z == 0) fail(ErrorClass::non_permissive, "conditional partition function is zero");
        for (size_t i = 0; i < comp.size(); ++i) {
            std::vector<Rat> row(m_->q);
            for (int c = 0; c < m_->q; ++c) row[c] = res.acc[i][c] / res.z;
            table[comp[i]] = std::move(row);
        }
    }
    return table;
}

Rat Oracle::mass(const Pinning& pin) const { return pinned_weight(*m_, pin) * Z(pin); }

Rat Oracle::ratio(const Pinning& sigma, const Pinning& tau) const {
    auto diff = diff_vertices(sigma, tau);
    if (diff.empty()) return Rat(1);
    std::set<int> dset(diff.begin(), diff.end());

    Rat num = 1, den = 1;
    for (int v : diff) {
        num *= m_->aV(v, sigma.at(v));
        den *= m_->aV(v, tau.at(v));
    }
    for (auto [u, v] : m_->graph.edges()) {
        if (!dset.count(u) && !dset.count(v)) continue;
        auto su = sigma.get(u), sv = sigma.get(v);
        if (su && sv) {
            num *= m_->aE(*su, *sv);
            den *= m_->aE(tau.at(u), tau.at(v));
        }
    }

    auto comps = free_components(sigma);
    size_t total = 0;
    for (auto& comp : comps) {
        bool affected = false;
        for (int v : comp) {
            for (int u : m_->graph.neighbors(v))
                if (dset.count(u)) {
                    affected = true;
                    break;
                }
            if (affected) break;
        }
        if (affected) total += comp.size();
    }
    check_cap(total);
    for (auto& comp : comps) {
        bool affected = false;
        for (int v : comp) {
            for (int u : m_->graph.neighbors(v))
                if (dset.count(u)) {
                    affected = true;
                    break;
                }
            if (affected) break;
        }
        if (!affected) continue;
        num *= component_z(sigma, comp);
        den *= component_z(tau, comp);
        if (num == 0 && den == 0) break;
    }
    if (den == 0) fail(ErrorClass::infeasible_pinning, "ratio denominator is zero");
    return num / den;
}

Rat Oracle::tv(const std::vector<Rat>& p, const std::vector<Rat>& q) {
    if (p.size() != q.size()) fail(ErrorClass::usage, "TV distance over different supports");
    Rat s = 0;
    for (size_t i = 0; i < p.size(); ++i) s += abs(p[i] - q[i]);
    return s / 2;
}

namespace {

// All configurations of the free vertices with positive conditional weight,
// with their probabilities.
struct SupportEnum {
    const SpinModel& m;
    const Pinning& pin;
    const std::vector<int>& free_v;
    long long cap;
    std::vector<std::vector<int>> configs;
    std::vector<Rat> wts;

    void run() {
        std::vector<int> cur(free_v.size(), -1);
        rec(0, cur, Rat(1));
    }

    void rec(size_t i, std::vector<int>& cur, const Rat& w) {
        if (i == free_v.size()) {
            if (static_cast<long long>(configs.size()) >= cap)
                fail(ErrorClass::size_cap, "W1 support exceeds state cap");
            configs.push_back(cur);
            wts.push_back(w);
            return;
        }
        int v = free_v[i];
        for (int c = 0; c < m.q; ++c) {
            Rat f = m.aV(v, c);
            if (f == 0) continue;
            for (int u : m.graph.neighbors(v)) {
                auto cu = pin.get(u);
                if (cu)
                    f *= m.aE(c, *cu);
                else {
                    // earlier free vertex?
                    auto it = std::find(free_v.begin(), free_v.begin() + i, u);
                    if (it != free_v.begin() + static_cast<long>(i)) f *= m.aE(c, cur[it - free_v.begin()]);
                }
                if (f == 0) break;
            }
            if (f == 0) continue;
            cur[i] = c;
            rec(i + 1, cur, w * f);
            cur[i] = -1;
        }
    }
};

} // namespace

Rat Oracle::w1_hamming(const Pinning& sigma, const Pinning& tau) const {
    if (sigma.domain() != tau.domain()) fail(ErrorClass::usage, "pinnings on different domains");
    std::vector<int> free_v;
    for (int v = 0; v < m_->n(); ++v)
        if (!sigma.contains(v)) free_v.push_back(v);

    SupportEnum a{*m_, sigma, free_v, caps_.max_w1_states, {}, {}};
    a.run();
    SupportEnum b{*m_, tau, free_v, caps_.max_w1_states, {}, {}};
    b.run();
    if (a.configs.empty() || b.configs.empty())
        fail(ErrorClass::non_permissive, "empty support in W1");

    Rat za = 0, zb = 0;
    for (auto& w : a.wts) za += w;
    for (auto& w : b.wts) zb += w;
    std::vector<Rat> supply(a.wts.size()), demand(b.wts.size());
    for (size_t i = 0; i < a.wts.size(); ++i) supply[i] = a.wts[i] / za;
    for (size_t j = 0; j < b.wts.size(); ++j) demand[j] = b.wts[j] / zb;

    std::vector<std::vector<int>> cost(a.configs.size(), std::vector<int>(b.configs.size()));
    for (size_t i = 0; i < a.configs.size(); ++i)
        for (size_t j = 0; j < b.configs.size(); ++j) {
            int h = 0;
            for (size_t t = 0; t < free_v.size(); ++t)
                if (a.configs[i][t] != b.configs[j][t]) ++h;
            cost[i][j] = h;
        }
    return transport_min_cost(supply, demand, cost);
}

Rat Oracle::total_influence(const Pinning& sigma, const Pinning& tau, int v, int l) const {
    auto diff = diff_vertices(sigma, tau);
    if (diff.empty()) return Rat(0);
    if (diff.size() != 1 || diff[0] != v)
        fail(ErrorClass::usage, "pinnings must differ exactly at the given vertex");
    auto ts = marginal_table(sigma);
    auto tt = marginal_table(tau);
    Rat s = 0;
    for (int u : m_->graph.sphere(v, l))
        if (!sigma.contains(u)) s += tv(ts[u], tt[u]);
    return s;
}

std::vector<Rat> Oracle::influence_profile(const Pinning& sigma, const Pinning& tau, int v,
                                           int lmax) const {
    auto diff = diff_vertices(sigma, tau);
    if (diff.empty()) return std::vector<Rat>(std::max(0, lmax), Rat(0));
    if (diff.size() != 1 || diff[0] != v)
        fail(ErrorClass::usage, "pinnings must differ exactly at the given vertex");
    auto ts = marginal_table(sigma);
    auto tt = marginal_table(tau);
    std::vector<Rat> out;
    for (int l = 1; l <= lmax; ++l) {
        Rat s = 0;
        for (int u : m_->graph.sphere(v, l))
            if (!sigma.contains(u)) s += tv(ts[u], tt[u]);
        out.push_back(s);
    }
    return out;
}

namespace {

// Normalized per-neighbour weight profiles: every vector of effective weights
// a neighbour u can carry once everything at distance two from v is pinned.
std::vector<std::vector<Rat>> neighbour_profiles(const SpinModel& m, int v, int u,
                                                 const std::vector<int>& inner) {
    std::vector<int> outside;
    for (int x : m.graph.neighbors(u)) {
        if (x == v) continue;
        if (std::find(inner.begin(), inner.end(), x) != inner.end()) continue;
        outside.push_back(x);
    }
    std::set<std::vector<Rat>> seen;
    std::vector<int> colours(outside.size(), 0);
    while (true) {
        std::vector<Rat> w(m.q);
        bool nonzero = false;
        for (int c = 0; c < m.q; ++c) {
            Rat f = m.aV(u, c);
            for (size_t i = 0; i < outside.size() && f != 0; ++i) f *= m.aE(c, colours[i]);
            w[c] = f;
            if (f != 0) nonzero = true;
        }
        if (!nonzero) fail(ErrorClass::non_permissive, "neighbour support empty under some boundary");
        // scale-normalize by the first nonzero entry
        Rat scale = 0;
        for (const Rat& x : w)
            if (x != 0) {
                scale = x;
                break;
            }
        for (Rat& x : w) x /= scale;
        seen.insert(w);
        size_t i = 0;
        while (i < colours.size() && colours[i] == m.q - 1) colours[i++] = 0;
        if (i == colours.size()) break;
        ++colours[i];
    }
    return {seen.begin(), seen.end()};
}

} // namespace

Rat Oracle::marginal_lower_bound() const {
    const SpinModel& m = *m_;
    Rat best = -1;
    for (int v = 0; v < m.n(); ++v) {
        std::vector<int> nb = m.graph.neighbors(v);
        int d = static_cast<int>(nb.size());
        // status per neighbour: 0..q-1 pinned with that colour, q+i free with
        // profile i
        std::vector<std::vector<std::vector<Rat>>> profiles(d);
        for (int i = 0; i < d; ++i) profiles[i] = neighbour_profiles(m, v, nb[i], nb);
        std::vector<int> status(d, 0);
        while (true) {
            // local instance: v plus the free neighbours
            std::vector<int> free_nb;
            std::vector<std::vector<Rat>> wts; // per free neighbour
            for (int i = 0; i < d; ++i)
                if (status[i] >= m.q) {
                    free_nb.push_back(i);
                    wts.push_back(profiles[i][status[i] - m.q]);
                }
            // fold pinned neighbours into effective weights
            std::vector<Rat> effv(m.q);
            for (int c = 0; c < m.q; ++c) {
                Rat f = m.aV(v, c);
                for (int i = 0; i < d && f != 0; ++i)
                    if (status[i] < m.q) f *= m.aE(c, status[i]);
                effv[c] = f;
            }
            for (size_t a = 0; a < free_nb.size(); ++a) {
                int i = free_nb[a];
                for (int c = 0; c < m.q; ++c) {
                    if (wts[a][c] == 0) continue;
                    for (int j = 0; j < d; ++j)
                        if (status[j] < m.q && m.graph.has_edge(nb[i], nb[j]))
                            wts[a][c] *= m.aE(c, status[j]);
                }
            }
            // f(c) = effv(c) * sum over free neighbour assignments
            std::vector<Rat> f(m.q, Rat(0));
            Rat ztot = 0;
            for (int c = 0; c < m.q; ++c) {
                if (effv[c] == 0) continue;
                Rat s = 0;
                std::vector<int> cs(free_nb.size(), -1);
                // small DFS over free neighbours
                struct Rec {
                    const SpinModel& m;
                    const std::vector<int>& nb;
                    const std::vector<int>& free_nb;
                    const std::vector<std::vector<Rat>>& wts;
                    std::vector<int>& cs;
                    int cv;
                    Rat run(size_t a) {
                        if (a == free_nb.size()) return Rat(1);
                        Rat tot = 0;
                        for (int c = 0; c < m.q; ++c) {
                            Rat g = wts[a][c];
                            if (g == 0) continue;
                            g *= m.aE(c, cv);
                            if (g == 0) continue;
                            for (size_t b2 = 0; b2 < a && g != 0; ++b2)
                                if (m.graph.has_edge(nb[free_nb[a]], nb[free_nb[b2]]))
                                    g *= m.aE(c, cs[b2]);
                            if (g == 0) continue;
                            cs[a] = c;
                            tot += g * run(a + 1);
                            cs[a] = -1;
                        }
                        return tot;
                    }
                } rec{m, nb, free_nb, wts, cs, c};
                s = rec.run(0);
                f[c] = effv[c] * s;
                ztot += f[c];
            }
            if (ztot == 0) fail(ErrorClass::non_permissive, "local conditional has empty support");
            for (int c = 0; c < m.q; ++c)
                if (f[c] != 0) {
                    Rat p = f[c] / ztot;
                    if (best < 0 || p < best) best = p;
                }
            // next status combination
            int i = 0;
            while (i < d && status[i] == m.q + static_cast<int>(profiles[i].size()) - 1)
                status[i++] = 0;
            if (i == d) break;
            ++status[i];
        }
    }
    return best;
}

} // namespace spinsys
