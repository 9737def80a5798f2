// Coupling tree: enumerates every intermediate state of the partial sphere
// coupling. Nodes carry the pinning pair, the pinned set, and the first
// disagreement vertex (bad leaves only).
#pragma once

#include <string>
#include <vector>

#include "spinsys/model.hpp"

namespace spinsys {

enum class NodeKind { internal, good_leaf, bad_leaf };

struct TreeNode {
    Pinning sigma, tau;
    int parent = -1;
    int pinned_vertex = -1; // sphere vertex pinned by the step creating this node
    int c_sigma = -1, c_tau = -1;
    int bad_vertex = -1;    // D: -1 means empty
    int resid = 0;          // l(w) = |S_R(u) \ pinned set|
    std::vector<int> children;
};

struct TreeCaps {
    long long max_nodes = 2000000;
};

struct CouplingTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root
    int u = -1;
    int R = 0;
    std::vector<int> sphere; // S_R(u), fixed once at the root

    int size() const { return static_cast<int>(nodes.size()); }
    NodeKind kind(int w) const {
        const TreeNode& nd = nodes[w];
        if (nd.bad_vertex >= 0) return NodeKind::bad_leaf;
        return nd.children.empty() ? NodeKind::good_leaf : NodeKind::internal;
    }
    std::vector<int> good_leaves() const;
    std::vector<int> bad_leaves() const;
    std::vector<int> leaves() const;
};

// Recursive construction: at each node, for every unpinned sphere vertex v
// (ascending) and every colour pair in supp(mu^sigma_v) x supp(mu^tau_v)
// (lexicographic), matching colours recurse and mismatches become bad leaves.
CouplingTree build_coupling_tree(const SpinModel& m, const Pinning& sigma, const Pinning& tau,
                                 int u, int R, TreeCaps caps = {});

// Canonical node-per-line text form for golden tests and debugging.
std::string serialize_tree(const CouplingTree& t);

} // namespace spinsys
