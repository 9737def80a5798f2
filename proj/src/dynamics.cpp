#include "spinsys/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "spinsys/error.hpp"

namespace spinsys {

FlipParams FlipParams::preset(const std::string& name) {
    FlipParams fp;
    fp.name = name;
    if (name == "vigoda2000") {
        // Vigoda (2000), J. Math. Phys. 41: p_1..p_6 = 1, 13/42, 1/6, 2/21, 1/21, 1/84
        fp.p = {1.0, 13.0 / 42.0, 1.0 / 6.0, 2.0 / 21.0, 1.0 / 21.0, 1.0 / 84.0};
    } else if (name == "uniform-lazy") {
        fp.p = {1.0, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0, 1.0 / 6.0};
    } else {
        fail(ErrorClass::validation, "unknown flip preset: " + name);
    }
    return fp;
}

SpinModel induced_model(const SpinModel& m, const Pinning& pin, std::vector<int>* vmap) {
    std::vector<int> free_v;
    std::vector<int> idx(m.n(), -1);
    for (int v = 0; v < m.n(); ++v)
        if (!pin.contains(v)) {
            idx[v] = static_cast<int>(free_v.size());
            free_v.push_back(v);
        }
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : m.graph.edges())
        if (idx[u] >= 0 && idx[v] >= 0) edges.push_back({idx[u], idx[v]});
    Graph g = Graph::from_edges(static_cast<int>(free_v.size()), std::move(edges));
    std::vector<std::vector<Rat>> vw(free_v.size());
    for (size_t i = 0; i < free_v.size(); ++i) {
        int v = free_v[i];
        vw[i].resize(m.q);
        for (int c = 0; c < m.q; ++c) {
            Rat w = m.aV(v, c);
            for (int u : m.graph.neighbors(v)) {
                if (w == 0) break;
                auto cu = pin.get(u);
                if (cu) w *= m.aE(c, *cu);
            }
            vw[i][c] = w;
        }
    }
    if (vmap) *vmap = free_v;
    SpinModel out = SpinModel::general(std::move(g), m.q, m.edge_w, std::move(vw));
    out.kind = m.kind;
    return out;
}

std::vector<int> kempe_component(const SpinModel& m, const Config& x, int v, int c) {
    int a = x[v];
    if (a == c) return {};
    std::vector<char> in(m.n(), 0);
    std::vector<int> out;
    std::queue<int> q;
    q.push(v);
    in[v] = 1;
    while (!q.empty()) {
        int w = q.front();
        q.pop();
        out.push_back(w);
        for (int u : m.graph.neighbors(w)) {
            if (in[u]) continue;
            if ((x[u] == a || x[u] == c) && x[u] != x[w]) {
                in[u] = 1;
                q.push(u);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// flips S between colours a and c; true iff every new colour stays in its
// vertex's list
bool apply_flip(const SpinModel& m, Config& x, const std::vector<int>& s, int a, int c) {
    for (int u : s) {
        int nc = x[u] == a ? c : a;
        if (m.aV(u, nc) == 0) return false;
    }
    for (int u : s) x[u] = x[u] == a ? c : a;
    return true;
}

} // namespace

void flip_step(const SpinModel& m, ChainState& st, const FlipParams& fp) {
    int v = static_cast<int>(st.rng.next_below(m.n()));
    int c = static_cast<int>(st.rng.next_below(m.q));
    if (c == st.x[v]) return;
    auto s = kempe_component(m, st.x, v, c);
    size_t l = s.size();
    double pr = fp.prob(l) / static_cast<double>(l);
    if (st.rng.next_unit() >= pr) return;
    Config trial = st.x;
    if (apply_flip(m, trial, s, st.x[v], c)) st.x = std::move(trial);
}

namespace {

std::vector<Rat> local_conditional(const SpinModel& m, const Config& x, int v) {
    std::vector<Rat> w(m.q);
    Rat tot = 0;
    for (int c = 0; c < m.q; ++c) {
        Rat f = m.aV(v, c);
        for (int u : m.graph.neighbors(v)) {
            if (f == 0) break;
            f *= m.aE(c, x[u]);
        }
        w[c] = f;
        tot += f;
    }
    if (tot == 0) fail(ErrorClass::non_permissive, "empty local conditional in Glauber step");
    for (auto& f : w) f /= tot;
    return w;
}

int sample_from(const std::vector<Rat>& dist, double u) {
    double acc = 0;
    for (size_t c = 0; c < dist.size(); ++c) {
        acc += rat_to_double(dist[c]);
        if (u < acc) return static_cast<int>(c);
    }
    for (int c = static_cast<int>(dist.size()) - 1; c >= 0; --c)
        if (dist[c] > 0) return c;
    fail(ErrorClass::solver, "sampling from empty distribution");
}

} // namespace

void glauber_step(const SpinModel& m, ChainState& st) {
    int v = static_cast<int>(st.rng.next_below(m.n()));
    auto dist = local_conditional(m, st.x, v);
    st.x[v] = sample_from(dist, st.rng.next_unit());
}

void coupled_flip_step(const SpinModel& mp, const SpinModel& mq, int v, Config& xp, Config& xq,
                       SplitMix64& rng, const FlipParams& fp) {
    if (mp.n() != mq.n() || mp.q != mq.q)
        fail(ErrorClass::usage, "coupled flip needs models on the same space");
    int u = static_cast<int>(rng.next_below(mp.n()));
    int c = static_cast<int>(rng.next_below(mp.q));
    if (xp != xq) {
        // chains already diverged: evolve each with shared (u,c) and shared
        // acceptance draw on its own state
        double d1 = rng.next_unit(), d2 = rng.next_unit();
        auto advance = [&](const SpinModel& m, Config& x, double draw) {
            if (c == x[u]) return;
            auto s = kempe_component(m, x, u, c);
            double pr = fp.prob(s.size()) / static_cast<double>(s.size());
            if (draw >= pr) return;
            Config trial = x;
            if (apply_flip(m, trial, s, x[u], c)) x = std::move(trial);
        };
        advance(mp, xp, d1);
        advance(mq, xq, d2);
        return;
    }
    if (c == xp[u]) return;
    auto s = kempe_component(mp, xp, u, c); // same in both: states agree
    if (s.size() >= 7) return;              // both stay lazily
    bool near = false;
    for (int w : s)
        if (w == v || mp.graph.has_edge(v, w)) {
            near = true;
            break;
        }
    double pr = fp.prob(s.size()) / static_cast<double>(s.size());
    if (!near) {
        // perfect coupling: identical move in both copies
        if (rng.next_unit() >= pr) return;
        Config tp = xp, tq = xq;
        bool okp = apply_flip(mp, tp, s, xp[u], c);
        bool okq = apply_flip(mq, tq, s, xq[u], c);
        if (okp) xp = std::move(tp);
        if (okq) xq = std::move(tq);
        return;
    }
    // independent moves
    double d1 = rng.next_unit(), d2 = rng.next_unit();
    if (d1 < pr) {
        Config tp = xp;
        if (apply_flip(mp, tp, s, xp[u], c)) xp = std::move(tp);
    }
    if (d2 < pr) {
        Config tq = xq;
        if (apply_flip(mq, tq, s, xq[u], c)) xq = std::move(tq);
    }
}

void coupled_glauber_step(const SpinModel& m, Config& x, Config& y, SplitMix64& rng) {
    int v = static_cast<int>(rng.next_below(m.n()));
    auto p = local_conditional(m, x, v);
    auto q = local_conditional(m, y, v);
    // maximal coupling: shared mass first, independent residuals otherwise
    Rat shared = 0;
    std::vector<Rat> common(m.q);
    for (int c = 0; c < m.q; ++c) {
        common[c] = std::min(p[c], q[c]);
        shared += common[c];
    }
    double u = rng.next_unit();
    double sh = rat_to_double(shared);
    if (u < sh || shared == 1) {
        double acc = 0;
        int c = m.q - 1;
        for (int i = 0; i < m.q; ++i) {
            acc += rat_to_double(common[i]);
            if (u < acc) {
                c = i;
                break;
            }
        }
        x[v] = c;
        y[v] = c;
        return;
    }
    std::vector<Rat> rp(m.q), rq(m.q);
    for (int c = 0; c < m.q; ++c) {
        rp[c] = (p[c] - common[c]) / (1 - shared);
        rq[c] = (q[c] - common[c]) / (1 - shared);
    }
    x[v] = sample_from(rp, rng.next_unit());
    y[v] = sample_from(rq, rng.next_unit());
}

DobrushinResult dobrushin_matrix(const SpinModel& m) {
    int n = m.n();
    DobrushinResult res;
    res.rho.assign(n, std::vector<Rat>(n, Rat(0)));
    for (int v = 0; v < n; ++v) {
        const auto& nb = m.graph.neighbors(v);
        int d = static_cast<int>(nb.size());
        for (int ui = 0; ui < d; ++ui) {
            int u = nb[ui];
            Rat worst = 0;
            // enumerate colours of the other neighbours, then the pair at u
            std::vector<int> rest;
            for (int j = 0; j < d; ++j)
                if (j != ui) rest.push_back(nb[j]);
            std::vector<int> colours(rest.size(), 0);
            while (true) {
                std::vector<std::vector<Rat>> dists;
                for (int cu = 0; cu < m.q; ++cu) {
                    std::vector<Rat> w(m.q);
                    Rat tot = 0;
                    for (int c = 0; c < m.q; ++c) {
                        Rat f = m.aV(v, c) * m.aE(c, cu);
                        for (size_t j = 0; j < rest.size() && f != 0; ++j)
                            f *= m.aE(c, colours[j]);
                        w[c] = f;
                        tot += f;
                    }
                    if (tot == 0)
                        fail(ErrorClass::non_permissive, "empty conditional in Dobrushin entry");
                    for (auto& f : w) f /= tot;
                    dists.push_back(std::move(w));
                }
                for (int c1 = 0; c1 < m.q; ++c1)
                    for (int c2 = c1 + 1; c2 < m.q; ++c2) {
                        Rat t = Oracle::tv(dists[c1], dists[c2]);
                        if (t > worst) worst = t;
                    }
                size_t j = 0;
                while (j < colours.size() && colours[j] == m.q - 1) colours[j++] = 0;
                if (j == colours.size()) break;
                ++colours[j];
            }
            res.rho[u][v] = worst;
        }
    }
    res.norm1 = 0;
    for (int u = 0; u < n; ++u) {
        Rat s = 0;
        for (int v = 0; v < n; ++v) s += res.rho[u][v];
        if (s > res.norm1) res.norm1 = s;
    }
    return res;
}

DobrushinResult dobrushin_matrix_literal(const SpinModel& m, int max_n) {
    int n = m.n();
    if (n > max_n) fail(ErrorClass::size_cap, "literal Dobrushin limited to tiny instances");
    DobrushinResult res;
    res.rho.assign(n, std::vector<Rat>(n, Rat(0)));
    Oracle oracle(m);
    for (int v = 0; v < n; ++v) {
        std::vector<int> others;
        for (int w = 0; w < n; ++w)
            if (w != v) others.push_back(w);
        std::vector<int> colours(others.size(), 0);
        while (true) {
            std::vector<std::pair<int, int>> base;
            for (size_t i = 0; i < others.size(); ++i) base.push_back({others[i], colours[i]});
            Pinning sigma{base};
            for (size_t i = 0; i < others.size(); ++i) {
                int u = others[i];
                auto ms = oracle.marginal(sigma, v);
                for (int c2 = 0; c2 < m.q; ++c2) {
                    if (c2 == colours[i]) continue;
                    Pinning tau = sigma.reassign(u, c2);
                    auto mt = oracle.marginal(tau, v);
                    Rat t = Oracle::tv(ms, mt);
                    if (t > res.rho[u][v]) res.rho[u][v] = t;
                }
            }
            size_t j = 0;
            while (j < colours.size() && colours[j] == m.q - 1) colours[j++] = 0;
            if (j == colours.size()) break;
            ++colours[j];
        }
    }
    res.norm1 = 0;
    for (int u = 0; u < n; ++u) {
        Rat s = 0;
        for (int v2 = 0; v2 < n; ++v2) s += res.rho[u][v2];
        if (s > res.norm1) res.norm1 = s;
    }
    return res;
}

Config random_proper_config(const SpinModel& m, SplitMix64& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Config x(m.n(), -1);
        // random vertex order, greedy supported colour
        std::vector<int> order(m.n());
        for (int i = 0; i < m.n(); ++i) order[i] = i;
        for (int i = m.n() - 1; i > 0; --i)
            std::swap(order[i], order[rng.next_below(i + 1)]);
        bool ok = true;
        for (int v : order) {
            std::vector<int> avail;
            for (int c = 0; c < m.q; ++c) {
                if (m.aV(v, c) == 0) continue;
                bool good = true;
                for (int u : m.graph.neighbors(v))
                    if (x[u] >= 0 && m.aE(c, x[u]) == 0) {
                        good = false;
                        break;
                    }
                if (good) avail.push_back(c);
            }
            if (avail.empty()) {
                ok = false;
                break;
            }
            x[v] = avail[rng.next_below(avail.size())];
        }
        if (ok) return x;
    }
    fail(ErrorClass::init, "could not build a proper initial configuration");
}

ContractionReport contraction_estimate(const SpinModel& m, ChainKind kind, const FlipParams& fp,
                                       int trials, int steps, uint64_t seed) {
    ContractionReport rep;
    rep.chain = kind == ChainKind::flip ? "flip" : "glauber";
    rep.preset = fp.name;
    rep.trials = trials;
    rep.steps = steps;
    rep.seed = seed;
    if (trials <= 0 || steps <= 0) return rep;
    rep.mean_dist.assign(steps + 1, 0.0);
    std::vector<double> per_trial_num(trials, 0.0), per_trial_den(trials, 0.0);
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::derive(seed, t);
        Config x = random_proper_config(m, rng);
        // disturb one vertex to another supported colour
        Config y = x;
        for (int tries = 0; tries < 4 * m.n(); ++tries) {
            int v = static_cast<int>(rng.next_below(m.n()));
            std::vector<int> alt;
            for (int c = 0; c < m.q; ++c) {
                if (c == x[v] || m.aV(v, c) == 0) continue;
                bool good = true;
                for (int u : m.graph.neighbors(v))
                    if (m.aE(c, x[u]) == 0) {
                        good = false;
                        break;
                    }
                if (good) alt.push_back(c);
            }
            if (!alt.empty()) {
                y[v] = alt[rng.next_below(alt.size())];
                break;
            }
        }
        if (y == x) fail(ErrorClass::init, "could not build a differing initial pair");
        auto dist = [&]() {
            int d = 0;
            for (int v = 0; v < m.n(); ++v)
                if (x[v] != y[v]) ++d;
            return d;
        };
        rep.mean_dist[0] += dist();
        for (int s = 1; s <= steps; ++s) {
            double before = dist();
            if (kind == ChainKind::glauber) {
                coupled_glauber_step(m, x, y, rng);
            } else {
                coupled_flip_step(m, m, /*v=*/-1, x, y, rng, fp);
            }
            double after = dist();
            rep.mean_dist[s] += after;
            per_trial_num[t] += after;
            per_trial_den[t] += before;
        }
    }
    for (auto& d : rep.mean_dist) d /= trials;
    double num = 0, den = 0;
    for (int t = 0; t < trials; ++t) {
        num += per_trial_num[t];
        den += per_trial_den[t];
    }
    if (den > 0) {
        rep.factor = num / den;
        // delta-method standard error of the pooled ratio
        double mean_n = num / trials, mean_d = den / trials;
        double var = 0;
        for (int t = 0; t < trials; ++t) {
            double dev = (per_trial_num[t] - rep.factor * per_trial_den[t]) / mean_d;
            var += dev * dev;
        }
        var /= trials > 1 ? trials - 1 : 1;
        rep.factor_se = std::sqrt(var / trials);
        rep.valid = true;
        (void)mean_n;
    }
    return rep;
}

Rat ci_estimate_exact(const Oracle& oracle, const Pinning& sigma, const Pinning& tau) {
    auto diff = diff_vertices(sigma, tau);
    if (diff.size() != 1) fail(ErrorClass::usage, "CI estimate needs a single-site discrepancy");
    return oracle.w1_hamming(sigma, tau);
}

CiMcReport ci_estimate_mc(const SpinModel& m, const Pinning& sigma, const Pinning& tau,
                          ChainKind kind, const FlipParams& fp, int trials, int steps,
                          uint64_t seed) {
    auto diff = diff_vertices(sigma, tau);
    if (diff.size() != 1) fail(ErrorClass::usage, "CI estimate needs a single-site discrepancy");
    CiMcReport rep;
    rep.trials = trials;
    rep.seed = seed;
    if (trials <= 0) return rep;

    std::vector<int> vmap;
    SpinModel mp = induced_model(m, sigma, &vmap);
    SpinModel mq = induced_model(m, tau, nullptr);
    // original discrepancy vertex mapped into the induced instance's frame:
    // only its neighbours matter, find any free neighbour's image
    int v_orig = diff[0];
    int v_ind = -1;
    for (size_t i = 0; i < vmap.size(); ++i)
        if (m.graph.has_edge(vmap[i], v_orig)) v_ind = static_cast<int>(i);

    // one-step disagreement from the stationary-ish state of P
    double sum_dis = 0;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::derive(seed, t);
        Config x = random_proper_config(mp, rng);
        ChainState st{x, rng};
        for (int s = 0; s < steps; ++s) {
            if (kind == ChainKind::glauber)
                glauber_step(mp, st);
            else
                flip_step(mp, st, fp);
        }
        Config xp = st.x, xq = st.x;
        if (kind == ChainKind::glauber) {
            // same vertex, each model resamples its own conditional
            int v = static_cast<int>(st.rng.next_below(mp.n()));
            auto dp = local_conditional(mp, xp, v);
            auto dq = local_conditional(mq, xq, v);
            Rat shared = 0;
            std::vector<Rat> common(m.q);
            for (int c = 0; c < m.q; ++c) {
                common[c] = std::min(dp[c], dq[c]);
                shared += common[c];
            }
            double u = st.rng.next_unit();
            if (u < rat_to_double(shared)) {
                double acc = 0;
                for (int c = 0; c < m.q; ++c) {
                    acc += rat_to_double(common[c]);
                    if (u < acc) {
                        xp[v] = c;
                        xq[v] = c;
                        break;
                    }
                }
            } else if (shared < 1) {
                std::vector<Rat> rp(m.q), rq(m.q);
                for (int c = 0; c < m.q; ++c) {
                    rp[c] = (dp[c] - common[c]) / (1 - shared);
                    rq[c] = (dq[c] - common[c]) / (1 - shared);
                }
                xp[v] = sample_from(rp, st.rng.next_unit());
                xq[v] = sample_from(rq, st.rng.next_unit());
            }
        } else {
            coupled_flip_step(mp, mq, v_ind, xp, xq, st.rng, fp);
        }
        int d = 0;
        for (int v = 0; v < mp.n(); ++v)
            if (xp[v] != xq[v]) ++d;
        sum_dis += d;
    }
    rep.c_dis = sum_dis / trials;

    ContractionReport cr = contraction_estimate(mq, kind, fp, trials, steps, seed ^ 0x5bd1e995);
    rep.delta = cr.valid ? 1.0 - cr.factor : 0.0;
    rep.value = rep.delta > 0 ? rep.c_dis / rep.delta : 0.0;
    return rep;
}

} // namespace spinsys
