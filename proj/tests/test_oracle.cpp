#include <doctest.h>

#include "spinsys/error.hpp"
#include "spinsys/gen.hpp"
#include "spinsys/oracle.hpp"
#include "spinsys/transport.hpp"

using namespace spinsys;

namespace {

Rat falling_factorial(int q, int n) {
    Rat r = 1;
    for (int i = 0; i < n; ++i) r *= q - i;
    return r;
}

} // namespace

TEST_CASE("partition function on known families") {
    Oracle p4(SpinModel::coloring(path_graph(4), 3));
    CHECK(p4.Z(Pinning()) == 24);

    Oracle k3(SpinModel::coloring(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}), 3));
    CHECK(k3.Z(Pinning()) == 6);

    Oracle hc(SpinModel::hardcore(Graph::from_edges(2, {{0, 1}}), Rat(1)));
    CHECK(hc.Z(Pinning()) == 3);

    // trees: q (q-1)^(n-1); complete graphs: falling factorial
    for (int q : {3, 4}) {
        Oracle star(SpinModel::coloring(star_graph(6), q));
        CHECK(star.Z(Pinning()) == Rat(q) * falling_factorial(q - 1, 1) *
                                       [&] { Rat r = 1; for (int i = 0; i < 5; ++i) r *= q - 1; return r; }() /
                                       (q - 1));
    }
    std::vector<std::pair<int, int>> k4e;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) k4e.push_back({i, j});
    Oracle k4(SpinModel::coloring(Graph::from_edges(4, k4e), 5));
    CHECK(k4.Z(Pinning()) == falling_factorial(5, 4));
}

TEST_CASE("conditional Z and size caps") {
    auto m = SpinModel::coloring(path_graph(4), 3);
    Oracle oracle(m);
    CHECK(oracle.Z(Pinning({{0, 0}})) == 8); // 24 / 3 by symmetry
    OracleCaps caps;
    caps.max_free = 2;
    Oracle tight(m, caps);
    CHECK_THROWS_AS(tight.Z(Pinning()), Error);
    CHECK(tight.Z(Pinning({{0, 0}, {2, 1}})) == 2);
}

TEST_CASE("exact marginals") {
    auto edge = SpinModel::coloring(Graph::from_edges(2, {{0, 1}}), 3);
    Oracle oracle(edge);
    auto uniform = oracle.marginal(Pinning(), 0);
    CHECK(uniform == std::vector<Rat>{Rat(1) / 3, Rat(1) / 3, Rat(1) / 3});
    auto cond = oracle.marginal(Pinning({{0, 0}}), 1);
    CHECK(cond == std::vector<Rat>{Rat(0), Rat(1) / 2, Rat(1) / 2});

    auto path = SpinModel::coloring(path_graph(3), 3);
    Oracle po(path);
    auto forced = po.marginal(Pinning({{0, 0}, {2, 1}}), 1);
    CHECK(forced == std::vector<Rat>{Rat(0), Rat(0), Rat(1)});

    // chain rule with unit vertex weights: mu(c) * Z^pin = Z^(pin + v->c)
    auto g = random_connected_graph(7, 3, 2, 21);
    auto m = SpinModel::coloring(g, 4);
    Oracle og(m);
    Pinning pin({{2, 1}});
    auto mu = og.marginal(pin, 4);
    for (int c = 0; c < 4; ++c) CHECK(mu[c] * og.Z(pin) == og.Z(pin.extend(4, c)));

    // weighted chain rule picks up the local factor
    auto hc = SpinModel::hardcore(path_graph(3), Rat(2));
    Oracle ho(hc);
    auto hmu = ho.marginal(Pinning(), 1);
    Rat local = hc.aV(1, 1);
    CHECK(hmu[1] * ho.Z(Pinning()) == local * ho.Z(Pinning().extend(1, 1)));
}

TEST_CASE("marginal table matches single-vertex marginals") {
    auto m = SpinModel::coloring(random_connected_graph(8, 3, 2, 7), 4);
    Oracle oracle(m);
    Pinning pin({{1, 0}});
    auto table = oracle.marginal_table(pin);
    for (int v = 0; v < m.n(); ++v) {
        if (pin.contains(v)) {
            CHECK(table[v].empty());
        } else {
            CHECK(table[v] == oracle.marginal(pin, v));
        }
    }
}

TEST_CASE("exact ratios") {
    auto star = SpinModel::coloring(star_graph(3), 3);
    Oracle oracle(star);
    Pinning s({{0, 0}}), t({{0, 1}});
    CHECK(oracle.ratio(s, t) == 1); // colour symmetry
    CHECK(oracle.ratio(s, s) == 1);

    // hardcore ratio picks up the pinned weight
    auto hc = SpinModel::hardcore(Graph::from_edges(2, {{0, 1}}), Rat(2));
    Oracle ho(hc);
    // mu(v0 occupied) = 2/7, mu(v0 empty) = 5/7 on an edge with lambda=2
    CHECK(ho.ratio(Pinning({{0, 1}}), Pinning({{0, 0}})) == Rat(2) / 5);

    auto m = SpinModel::coloring(path_graph(5), 3);
    Oracle po(m);
    Pinning a({{2, 0}}), b({{2, 2}});
    Rat direct = po.ratio(a, b);
    CHECK(direct == (pinned_weight(m, a) * po.Z(a)) / (pinned_weight(m, b) * po.Z(b)));
}

TEST_CASE("tv distance") {
    CHECK(Oracle::tv({Rat(1) / 2, Rat(1) / 2}, {Rat(1) / 2, Rat(1) / 2}) == 0);
    CHECK(Oracle::tv({Rat(0), Rat(1) / 2, Rat(1) / 2}, {Rat(1) / 2, Rat(0), Rat(1) / 2}) ==
          Rat(1) / 2);
    CHECK(Oracle::tv({Rat(1), Rat(0)}, {Rat(0), Rat(1)}) == 1);
}

TEST_CASE("transport solves tiny instances") {
    CHECK(transport_min_cost({Rat(1)}, {Rat(1)}, {{7}}) == 7);
    CHECK(transport_min_cost({Rat(1) / 2, Rat(1) / 2}, {Rat(1) / 2, Rat(1) / 2},
                             {{0, 1}, {1, 0}}) == 0);
    // move half the mass at unit cost
    CHECK(transport_min_cost({Rat(1) / 2, Rat(1) / 2}, {Rat(1), Rat(0)}, {{0, 1}, {1, 0}}) ==
          Rat(1) / 2);
    // 2x3 with a cheap diagonal
    CHECK(transport_min_cost({Rat(2), Rat(3)}, {Rat(1), Rat(1), Rat(3)},
                             {{1, 9, 4}, {5, 2, 3}}) == Rat(1 + 4 * 1 + 2 * 1 + 3 * 2));
}

TEST_CASE("w1 hamming") {
    auto edge = SpinModel::coloring(Graph::from_edges(2, {{0, 1}}), 3);
    Oracle oracle(edge);
    Pinning s({{0, 0}}), t({{0, 1}});
    CHECK(oracle.w1_hamming(s, s) == 0);
    CHECK(oracle.w1_hamming(s, t) == Rat(1) / 2);

    // deterministic single-coordinate relabel costs exactly one move
    auto e2 = SpinModel::coloring(Graph::from_edges(2, {{0, 1}}), 2);
    Oracle o2(e2);
    CHECK(o2.w1_hamming(Pinning({{0, 0}}), Pinning({{0, 1}})) == 1);
}

TEST_CASE("w1 dominates summed tv and satisfies the triangle inequality") {
    auto m = SpinModel::coloring(cycle_graph(5), 4);
    Oracle oracle(m);
    std::vector<Pinning> pins = {Pinning({{0, 0}, {2, 1}}), Pinning({{0, 1}, {2, 1}}),
                                 Pinning({{0, 3}, {2, 1}})};
    for (const auto& a : pins)
        for (const auto& b : pins) {
            Rat w = oracle.w1_hamming(a, b);
            auto ta = oracle.marginal_table(a);
            auto tb = oracle.marginal_table(b);
            Rat sum_tv = 0;
            for (int v = 0; v < m.n(); ++v)
                if (!a.contains(v)) sum_tv += Oracle::tv(ta[v], tb[v]);
            CHECK(w >= sum_tv);
        }
    CHECK(oracle.w1_hamming(pins[0], pins[2]) <=
          oracle.w1_hamming(pins[0], pins[1]) + oracle.w1_hamming(pins[1], pins[2]));
}

TEST_CASE("total influence") {
    auto edge = SpinModel::coloring(Graph::from_edges(2, {{0, 1}}), 3);
    Oracle oracle(edge);
    Pinning s({{0, 0}}), t({{0, 1}});
    CHECK(oracle.total_influence(s, t, 0, 1) == Rat(1) / 2);
    CHECK(oracle.total_influence(s, t, 0, 5) == 0); // empty sphere
    CHECK(oracle.total_influence(s, s, 0, 1) == 0);

    auto profile = oracle.influence_profile(s, t, 0, 3);
    CHECK(profile == std::vector<Rat>{Rat(1) / 2, Rat(0), Rat(0)});
}

TEST_CASE("certified marginal lower bound") {
    Oracle lone(SpinModel::coloring(Graph::from_edges(1, {}), 3));
    CHECK(lone.marginal_lower_bound() == Rat(1) / 3);

    Oracle edge(SpinModel::coloring(Graph::from_edges(2, {{0, 1}}), 3));
    CHECK(edge.marginal_lower_bound() == Rat(1) / 3);

    // q = Delta + 2 keeps it positive, and it must lower-bound every
    // observable conditional marginal
    auto g = random_connected_graph(7, 3, 2, 13);
    auto m = SpinModel::coloring(g, 5);
    Oracle oracle(m);
    Rat b = oracle.marginal_lower_bound();
    CHECK(b > 0);
    std::vector<Pinning> pins = {Pinning(), Pinning({{0, 1}}), Pinning({{0, 1}, {4, 1}}),
                                 Pinning({{1, 2}, {2, 2}, {6, 0}})};
    for (const auto& pin : pins)
        for (int v = 0; v < m.n(); ++v) {
            if (pin.contains(v)) continue;
            for (const Rat& p : oracle.marginal(pin, v))
                if (p > 0) CHECK(p >= b);
        }
}
