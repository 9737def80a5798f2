// Spin systems (graph, q, edge matrix, per-vertex weights), pinnings, and the
// local operations every other module builds on.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinsys/graph.hpp"
#include "spinsys/rational.hpp"

namespace spinsys {

// Partial configuration on a vertex subset. Immutable value type; assignments
// are kept sorted by vertex, which doubles as the canonical encoding.
// Infeasible pinnings (violating edge or vertex constraints) are allowed.
class Pinning {
  public:
    Pinning() = default;
    explicit Pinning(std::vector<std::pair<int, int>> assign);

    bool contains(int v) const;
    // colour at v; usage error if v unpinned
    int at(int v) const;
    std::optional<int> get(int v) const;
    int size() const { return static_cast<int>(assign_.size()); }
    bool empty() const { return assign_.empty(); }
    const std::vector<std::pair<int, int>>& items() const { return assign_; }
    std::vector<int> domain() const;

    // Value semantics: returns a new pinning, errors if v already pinned.
    Pinning extend(int v, int c) const;
    // Pinning with v's assignment replaced (v must be pinned).
    Pinning reassign(int v, int c) const;

    // Canonical byte encoding, usable as a hash/map key.
    std::string encode() const;

    bool operator==(const Pinning& o) const { return assign_ == o.assign_; }

  private:
    std::vector<std::pair<int, int>> assign_; // sorted by vertex
};

using Config = std::vector<int>; // total assignment V -> [q], 0-based colours

enum class ModelKind { coloring, list_coloring, hardcore, ising, general };

struct SpinModel {
    Graph graph;
    int q = 0;
    ModelKind kind = ModelKind::general;
    std::vector<std::vector<Rat>> edge_w;              // q x q, symmetric
    std::vector<std::vector<Rat>> vertex_w;            // n x q (per-vertex)

    static SpinModel coloring(Graph g, int q);
    static SpinModel list_coloring(Graph g, int q, std::vector<std::vector<int>> lists);
    static SpinModel hardcore(Graph g, const Rat& lambda);
    // Two-spin model with coupling matrix ((e^b,1),(1,e^b)) given as a
    // rational edge activity w = "e^b", and vertex field (1, field).
    static SpinModel ising(Graph g, const Rat& edge_activity, const Rat& field);
    static SpinModel general(Graph g, int q, std::vector<std::vector<Rat>> edge_w,
                             std::vector<std::vector<Rat>> vertex_w);

    int n() const { return graph.n(); }
    const Rat& aE(int c1, int c2) const { return edge_w[c1][c2]; }
    const Rat& aV(int v, int c) const { return vertex_w[v][c]; }

    // True iff every weight entry is 0 or 1 (pure hard-constraint model);
    // partition sums are then plain counts.
    bool hard01() const;
    // True iff permuting colours leaves the model invariant (unweighted
    // colouring with identical full lists everywhere).
    bool colour_symmetric() const;

    void validate() const;
};

// w(x) = prod_edges A_E(x_u,x_v) * prod_v A_V(v,x_v); x total.
Rat weight(const SpinModel& m, const Config& x);

// Conditional weight w^pin(x): 0 unless x agrees with pin; otherwise the
// product over free-vertex weights, free-pinned and free-free edges. Edges
// and vertex weights inside the pinned set are not counted.
Rat conditional_weight(const SpinModel& m, const Pinning& pin, const Config& x);

// Weight carried by the pinned set itself: prod A_V over pinned vertices
// times prod A_E over pinned-pinned edges. Marginal mass mu_L(pin) equals
// pinned_weight * Z^pin / Z.
Rat pinned_weight(const SpinModel& m, const Pinning& pin);

// Colours c with A_V(v,c) > 0 and A_E(c, pin(u)) > 0 for every pinned
// neighbour u. Local computation; equals supp(mu^pin_v) on permissive systems.
std::vector<int> support(const SpinModel& m, const Pinning& pin, int v);

// Local feasibility of the pinning itself: all pinned A_V and pinned-pinned
// edge factors positive. Locally feasible pinnings have mu_L(pin) > 0 on
// permissive systems.
bool locally_feasible(const SpinModel& m, const Pinning& pin);

// Exact permissiveness check. For every vertex and every assignment of its
// neighbourhood (arbitrary colours, matching that conditional weights ignore
// pinned-set factors), the local support must be nonempty; this is both
// sufficient and necessary. q^(deg) work per vertex.
bool is_permissive(const SpinModel& m);

// Literal check of the definition: enumerates every subset L and every
// pinning on it, testing Z^pin > 0 by greedy-free brute force. Debug only.
bool is_permissive_exhaustive(const SpinModel& m, int max_n = 14);

} // namespace spinsys
