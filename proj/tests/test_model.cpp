#include <doctest.h>

#include "spinsys/dynamics.hpp"
#include "spinsys/error.hpp"
#include "spinsys/gen.hpp"
#include "spinsys/model.hpp"
#include "spinsys/oracle.hpp"

using namespace spinsys;

TEST_CASE("weight basics") {
    auto k3 = SpinModel::coloring(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}), 3);
    CHECK(weight(k3, {0, 1, 2}) == 1);
    CHECK(weight(k3, {0, 0, 2}) == 0);

    auto edge = SpinModel::coloring(Graph::from_edges(2, {{0, 1}}), 3);
    CHECK(weight(edge, {1, 1}) == 0);
    CHECK(weight(edge, {1, 2}) == 1);

    auto hc = SpinModel::hardcore(Graph::from_edges(2, {{0, 1}}), Rat(2));
    CHECK(weight(hc, {0, 0}) == 1);
    CHECK(weight(hc, {1, 0}) == 2);
    CHECK(weight(hc, {1, 1}) == 0);
}

TEST_CASE("conditional weight ignores pinned-internal factors") {
    auto path = SpinModel::coloring(path_graph(3), 3);
    Pinning ends({{0, 0}, {2, 0}});
    CHECK(conditional_weight(path, ends, {0, 1, 0}) == 1);
    CHECK(conditional_weight(path, ends, {0, 0, 0}) == 0); // free vertex clashes
    CHECK(conditional_weight(path, ends, {1, 1, 0}) == 0); // disagrees with pin

    // adjacent infeasible pin contributes nothing from inside the pinned set
    Pinning infeasible({{0, 0}, {1, 0}});
    CHECK(conditional_weight(path, infeasible, {0, 0, 1}) == 1);

    // matches plain weight under the empty pin
    auto hc = SpinModel::hardcore(path_graph(4), Rat(3) / 2);
    Config x{1, 0, 1, 0};
    CHECK(conditional_weight(hc, Pinning(), x) == weight(hc, x));
}

TEST_CASE("support is local") {
    auto edge = SpinModel::coloring(Graph::from_edges(2, {{0, 1}}), 3);
    CHECK(support(edge, Pinning({{0, 0}}), 1) == std::vector<int>{1, 2});

    auto lone = SpinModel::coloring(Graph::from_edges(1, {}), 3);
    CHECK(support(lone, Pinning(), 0) == std::vector<int>{0, 1, 2});

    auto lists = SpinModel::list_coloring(Graph::from_edges(2, {{0, 1}}), 3, {{0, 1}, {0, 1, 2}});
    CHECK(support(lists, Pinning({{1, 1}}), 0) == std::vector<int>{0});
}

TEST_CASE("support equals brute-force support on permissive instances") {
    auto g = random_connected_graph(7, 3, 2, 11);
    auto m = SpinModel::coloring(g, 5);
    Oracle oracle(m);
    Pinning pin({{0, 2}, {3, 2}, {5, 1}});
    for (int v = 0; v < m.n(); ++v) {
        if (pin.contains(v)) continue;
        auto sup = support(m, pin, v);
        auto mu = oracle.marginal(pin, v);
        std::vector<int> brute;
        for (int c = 0; c < m.q; ++c)
            if (mu[c] > 0) brute.push_back(c);
        CHECK(sup == brute);
    }
}

TEST_CASE("extend semantics") {
    Pinning p;
    Pinning p2 = p.extend(4, 1);
    CHECK(p.empty());
    CHECK(p2.at(4) == 1);
    std::string before = p2.encode();
    Pinning p3 = p2.extend(2, 0);
    CHECK(p2.encode() == before);
    CHECK(p3.size() == 2);
    CHECK_THROWS_AS(p3.extend(4, 2), Error);

    // infeasible pinnings are allowed
    auto edge = SpinModel::coloring(Graph::from_edges(2, {{0, 1}}), 3);
    Pinning mono = Pinning({{0, 1}}).extend(1, 1);
    CHECK(mono.at(1) == 1);
    CHECK_FALSE(locally_feasible(edge, mono));
}

TEST_CASE("sphere and ball") {
    Graph p3 = path_graph(3);
    CHECK(p3.sphere(1, 1) == std::vector<int>{0, 2});
    CHECK(p3.sphere(1, 0) == std::vector<int>{1});
    CHECK(p3.ball(1, 0) == std::vector<int>{1});

    auto g = random_connected_graph(9, 3, 3, 5);
    for (int v = 0; v < g.n(); ++v)
        for (int l = 1; l <= 4; ++l) {
            auto s = g.sphere(v, l);
            auto bl = g.ball(v, l);
            auto bl1 = g.ball(v, l - 1);
            std::vector<int> diff;
            for (int x : bl)
                if (std::find(bl1.begin(), bl1.end(), x) == bl1.end()) diff.push_back(x);
            CHECK(s == diff);
        }
}

TEST_CASE("permissiveness") {
    // q = deg + 1 lists keep colourings permissive
    auto g = random_connected_graph(8, 3, 2, 3);
    CHECK(is_permissive(SpinModel::coloring(g, 4)));
    CHECK(is_permissive(SpinModel::hardcore(g, Rat(7) / 3)));
    CHECK_FALSE(is_permissive(SpinModel::coloring(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}), 2)));

    // literal definition agrees at tiny scale
    auto tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(is_permissive_exhaustive(SpinModel::coloring(tri, 4)) ==
          is_permissive(SpinModel::coloring(tri, 4)));
    CHECK(is_permissive_exhaustive(SpinModel::coloring(tri, 2)) ==
          is_permissive(SpinModel::coloring(tri, 2)));
    auto p4 = path_graph(4);
    CHECK(is_permissive_exhaustive(SpinModel::coloring(p4, 2)) ==
          is_permissive(SpinModel::coloring(p4, 2)));
}

TEST_CASE("model validation") {
    auto g = path_graph(2);
    CHECK_THROWS_AS(SpinModel::general(g, 2, {{Rat(1), Rat(-1)}, {Rat(-1), Rat(1)}},
                                       {{Rat(1), Rat(1)}}),
                    Error);
    CHECK_THROWS_AS(SpinModel::general(g, 2, {{Rat(1)}, {Rat(1), Rat(1)}}, {{Rat(1), Rat(1)}}),
                    Error);
    CHECK(SpinModel::coloring(g, 3).colour_symmetric());
    CHECK_FALSE(SpinModel::hardcore(g, Rat(2)).colour_symmetric());
    CHECK(SpinModel::coloring(g, 3).hard01());
    CHECK_FALSE(SpinModel::hardcore(g, Rat(2)).hard01());
    CHECK(SpinModel::hardcore(g, Rat(1)).hard01());
}
