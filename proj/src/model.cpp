#include "spinsys/model.hpp"

#include <algorithm>
#include <cstring>

#include "spinsys/error.hpp"

namespace spinsys {

Pinning::Pinning(std::vector<std::pair<int, int>> assign) : assign_(std::move(assign)) {
    std::sort(assign_.begin(), assign_.end());
    for (size_t i = 1; i < assign_.size(); ++i)
        if (assign_[i].first == assign_[i - 1].first)
            fail(ErrorClass::usage, "vertex pinned twice: " + std::to_string(assign_[i].first));
}

bool Pinning::contains(int v) const {
    return std::binary_search(assign_.begin(), assign_.end(), std::make_pair(v, 0),
                              [](auto a, auto b) { return a.first < b.first; });
}

std::optional<int> Pinning::get(int v) const {
    auto it = std::lower_bound(assign_.begin(), assign_.end(), std::make_pair(v, 0),
                               [](auto a, auto b) { return a.first < b.first; });
    if (it == assign_.end() || it->first != v) return std::nullopt;
    return it->second;
}

int Pinning::at(int v) const {
    auto c = get(v);
    if (!c) fail(ErrorClass::usage, "vertex " + std::to_string(v) + " not pinned");
    return *c;
}

std::vector<int> Pinning::domain() const {
    std::vector<int> d;
    d.reserve(assign_.size());
    for (auto& [v, c] : assign_) d.push_back(v);
    return d;
}

Pinning Pinning::extend(int v, int c) const {
    if (contains(v)) fail(ErrorClass::usage, "extend: vertex " + std::to_string(v) + " already pinned");
    Pinning p;
    p.assign_ = assign_;
    p.assign_.insert(std::upper_bound(p.assign_.begin(), p.assign_.end(), std::make_pair(v, c)),
                     {v, c});
    return p;
}

Pinning Pinning::reassign(int v, int c) const {
    Pinning p;
    p.assign_ = assign_;
    auto it = std::lower_bound(p.assign_.begin(), p.assign_.end(), std::make_pair(v, 0),
                               [](auto a, auto b) { return a.first < b.first; });
    if (it == p.assign_.end() || it->first != v)
        fail(ErrorClass::usage, "reassign: vertex " + std::to_string(v) + " not pinned");
    it->second = c;
    return p;
}

std::string Pinning::encode() const {
    std::string s;
    s.reserve(assign_.size() * 8);
    for (auto& [v, c] : assign_) {
        char buf[8];
        std::memcpy(buf, &v, 4);
        std::memcpy(buf + 4, &c, 4);
        s.append(buf, 8);
    }
    return s;
}

static std::vector<std::vector<Rat>> uniform_vertex_w(int n, int q) {
    return std::vector<std::vector<Rat>>(n, std::vector<Rat>(q, Rat(1)));
}

SpinModel SpinModel::coloring(Graph g, int q) {
    SpinModel m;
    m.q = q;
    m.kind = ModelKind::coloring;
    m.edge_w.assign(q, std::vector<Rat>(q, Rat(1)));
    for (int c = 0; c < q; ++c) m.edge_w[c][c] = 0;
    m.vertex_w = uniform_vertex_w(g.n(), q);
    m.graph = std::move(g);
    m.validate();
    return m;
}

SpinModel SpinModel::list_coloring(Graph g, int q, std::vector<std::vector<int>> lists) {
    SpinModel m = coloring(std::move(g), q);
    m.kind = ModelKind::list_coloring;
    if (static_cast<int>(lists.size()) != m.n())
        fail(ErrorClass::validation, "list count != vertex count");
    for (int v = 0; v < m.n(); ++v) {
        std::fill(m.vertex_w[v].begin(), m.vertex_w[v].end(), Rat(0));
        for (int c : lists[v]) {
            if (c < 0 || c >= q) fail(ErrorClass::validation, "list colour out of range");
            m.vertex_w[v][c] = 1;
        }
    }
    m.validate();
    return m;
}

SpinModel SpinModel::hardcore(Graph g, const Rat& lambda) {
    if (lambda < 0) fail(ErrorClass::validation, "negative hardcore activity");
    SpinModel m;
    m.q = 2;
    m.kind = ModelKind::hardcore;
    // colour 1 = occupied
    m.edge_w = {{Rat(1), Rat(1)}, {Rat(1), Rat(0)}};
    m.vertex_w.assign(g.n(), {Rat(1), lambda});
    m.graph = std::move(g);
    m.validate();
    return m;
}

SpinModel SpinModel::ising(Graph g, const Rat& edge_activity, const Rat& field) {
    if (edge_activity < 0 || field < 0) fail(ErrorClass::validation, "negative ising weights");
    SpinModel m;
    m.q = 2;
    m.kind = ModelKind::ising;
    m.edge_w = {{edge_activity, Rat(1)}, {Rat(1), edge_activity}};
    m.vertex_w.assign(g.n(), {Rat(1), field});
    m.graph = std::move(g);
    m.validate();
    return m;
}

SpinModel SpinModel::general(Graph g, int q, std::vector<std::vector<Rat>> edge_w,
                             std::vector<std::vector<Rat>> vertex_w) {
    SpinModel m;
    m.q = q;
    m.kind = ModelKind::general;
    m.edge_w = std::move(edge_w);
    if (vertex_w.size() == 1 && g.n() != 1)
        m.vertex_w.assign(g.n(), vertex_w[0]); // single A_V broadcast per vertex
    else
        m.vertex_w = std::move(vertex_w);
    m.graph = std::move(g);
    m.validate();
    return m;
}

void SpinModel::validate() const {
    if (q < 2) fail(ErrorClass::validation, "q must be >= 2");
    if (static_cast<int>(edge_w.size()) != q) fail(ErrorClass::validation, "A_E dimension mismatch");
    for (const auto& row : edge_w) {
        if (static_cast<int>(row.size()) != q) fail(ErrorClass::validation, "A_E dimension mismatch");
        for (const auto& x : row)
            if (x < 0) fail(ErrorClass::validation, "negative A_E entry");
    }
    for (int c1 = 0; c1 < q; ++c1)
        for (int c2 = c1 + 1; c2 < q; ++c2)
            if (edge_w[c1][c2] != edge_w[c2][c1]) fail(ErrorClass::validation, "A_E not symmetric");
    if (static_cast<int>(vertex_w.size()) != graph.n())
        fail(ErrorClass::validation, "A_V vertex count mismatch");
    for (const auto& row : vertex_w) {
        if (static_cast<int>(row.size()) != q) fail(ErrorClass::validation, "A_V dimension mismatch");
        for (const auto& x : row)
            if (x < 0) fail(ErrorClass::validation, "negative A_V entry");
    }
}

bool SpinModel::hard01() const {
    auto is01 = [](const Rat& x) { return x == 0 || x == 1; };
    for (const auto& row : edge_w)
        for (const auto& x : row)
            if (!is01(x)) return false;
    for (const auto& row : vertex_w)
        for (const auto& x : row)
            if (!is01(x)) return false;
    return true;
}

bool SpinModel::colour_symmetric() const {
    for (int c1 = 0; c1 < q; ++c1)
        for (int c2 = 0; c2 < q; ++c2)
            if (edge_w[c1][c2] != (c1 == c2 ? edge_w[0][0] : edge_w[0][1])) return false;
    for (const auto& row : vertex_w)
        for (const auto& x : row)
            if (x != vertex_w[0][0]) return false;
    return true;
}

Rat weight(const SpinModel& m, const Config& x) {
    if (static_cast<int>(x.size()) != m.n()) fail(ErrorClass::usage, "configuration size mismatch");
    Rat w = 1;
    for (auto [u, v] : m.graph.edges()) {
        w *= m.aE(x[u], x[v]);
        if (w == 0) return w;
    }
    for (int v = 0; v < m.n(); ++v) {
        w *= m.aV(v, x[v]);
        if (w == 0) return w;
    }
    return w;
}

Rat conditional_weight(const SpinModel& m, const Pinning& pin, const Config& x) {
    if (static_cast<int>(x.size()) != m.n()) fail(ErrorClass::usage, "configuration size mismatch");
    for (auto& [v, c] : pin.items())
        if (x[v] != c) return Rat(0);
    Rat w = 1;
    for (auto [u, v] : m.graph.edges()) {
        if (pin.contains(u) && pin.contains(v)) continue;
        w *= m.aE(x[u], x[v]);
        if (w == 0) return w;
    }
    for (int v = 0; v < m.n(); ++v) {
        if (pin.contains(v)) continue;
        w *= m.aV(v, x[v]);
        if (w == 0) return w;
    }
    return w;
}

Rat pinned_weight(const SpinModel& m, const Pinning& pin) {
    Rat w = 1;
    for (auto& [v, c] : pin.items()) w *= m.aV(v, c);
    for (auto [u, v] : m.graph.edges()) {
        auto cu = pin.get(u), cv = pin.get(v);
        if (cu && cv) w *= m.aE(*cu, *cv);
    }
    return w;
}

std::vector<int> support(const SpinModel& m, const Pinning& pin, int v) {
    if (pin.contains(v)) fail(ErrorClass::usage, "support: vertex is pinned");
    std::vector<int> out;
    for (int c = 0; c < m.q; ++c) {
        if (m.aV(v, c) == 0) continue;
        bool ok = true;
        for (int u : m.graph.neighbors(v)) {
            auto cu = pin.get(u);
            if (cu && m.aE(c, *cu) == 0) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(c);
    }
    return out;
}

bool locally_feasible(const SpinModel& m, const Pinning& pin) {
    for (auto& [v, c] : pin.items())
        if (m.aV(v, c) == 0) return false;
    for (auto [u, v] : m.graph.edges()) {
        auto cu = pin.get(u), cv = pin.get(v);
        if (cu && cv && m.aE(*cu, *cv) == 0) return false;
    }
    return true;
}

bool is_permissive(const SpinModel& m) {
    // Pinned colours are arbitrary (conditional weights ignore pinned-set
    // factors), so the neighbourhood assignments range over all of [q]^deg.
    // Empty local support for some assignment gives Z^pin = 0 directly;
    // nonempty support everywhere lets any pinning extend greedily.
    for (int v = 0; v < m.n(); ++v) {
        const auto& nb = m.graph.neighbors(v);
        int d = static_cast<int>(nb.size());
        std::vector<int> colours(d, 0);
        while (true) {
            bool any = false;
            for (int c = 0; c < m.q && !any; ++c) {
                if (m.aV(v, c) == 0) continue;
                bool ok = true;
                for (int i = 0; i < d && ok; ++i)
                    if (m.aE(c, colours[i]) == 0) ok = false;
                any = ok;
            }
            if (!any) return false;
            int i = 0;
            while (i < d && colours[i] == m.q - 1) colours[i++] = 0;
            if (i == d) break;
            ++colours[i];
        }
    }
    return true;
}

namespace {

bool greedy_extends(const SpinModel& m, const Pinning& pin) {
    Pinning cur = pin;
    for (int v = 0; v < m.n(); ++v) {
        if (cur.contains(v)) continue;
        auto sup = support(m, cur, v);
        if (sup.empty()) return false;
        cur = cur.extend(v, sup[0]);
    }
    return true;
}

bool brute_positive_Z(const SpinModel& m, const Pinning& pin) {
    // Z^pin > 0 iff some completion of the free vertices has positive
    // conditional weight; a DFS with pruning decides it.
    std::vector<int> free;
    for (int v = 0; v < m.n(); ++v)
        if (!pin.contains(v)) free.push_back(v);
    Config x(m.n(), -1);
    for (auto& [v, c] : pin.items()) x[v] = c;
    std::vector<int> order = free;
    // DFS
    struct Rec {
        const SpinModel& m;
        Config& x;
        const std::vector<int>& order;
        bool run(size_t i) {
            if (i == order.size()) return true;
            int v = order[i];
            for (int c = 0; c < m.q; ++c) {
                if (m.aV(v, c) == 0) continue;
                bool ok = true;
                for (int u : m.graph.neighbors(v))
                    if (x[u] >= 0 && m.aE(c, x[u]) == 0) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                x[v] = c;
                if (run(i + 1)) {
                    x[v] = -1;
                    return true;
                }
                x[v] = -1;
            }
            return false;
        }
    } rec{m, x, order};
    return rec.run(0);
}

} // namespace

bool is_permissive_exhaustive(const SpinModel& m, int max_n) {
    if (m.n() > max_n) fail(ErrorClass::size_cap, "instance too large for exhaustive permissiveness check");
    int n = m.n();
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> dom;
        for (int v = 0; v < n; ++v)
            if (mask & (1 << v)) dom.push_back(v);
        std::vector<int> colours(dom.size(), 0);
        while (true) {
            std::vector<std::pair<int, int>> assign;
            for (size_t i = 0; i < dom.size(); ++i) assign.push_back({dom[i], colours[i]});
            Pinning pin(std::move(assign));
            if (!greedy_extends(m, pin) && !brute_positive_Z(m, pin)) return false;
            size_t i = 0;
            while (i < colours.size() && colours[i] == m.q - 1) colours[i++] = 0;
            if (i == colours.size()) break;
            ++colours[i];
        }
        if (dom.empty()) continue;
    }
    return true;
}

} // namespace spinsys
