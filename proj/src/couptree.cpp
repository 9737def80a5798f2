#include "spinsys/couptree.hpp"

#include <algorithm>
#include <sstream>

#include "spinsys/error.hpp"
#include "spinsys/oracle.hpp"

namespace spinsys {

std::vector<int> CouplingTree::good_leaves() const {
    std::vector<int> out;
    for (int w = 0; w < size(); ++w)
        if (kind(w) == NodeKind::good_leaf) out.push_back(w);
    return out;
}

std::vector<int> CouplingTree::bad_leaves() const {
    std::vector<int> out;
    for (int w = 0; w < size(); ++w)
        if (kind(w) == NodeKind::bad_leaf) out.push_back(w);
    return out;
}

std::vector<int> CouplingTree::leaves() const {
    std::vector<int> out;
    for (int w = 0; w < size(); ++w)
        if (kind(w) != NodeKind::internal) out.push_back(w);
    return out;
}

namespace {

struct Builder {
    const SpinModel& m;
    CouplingTree& t;
    const TreeCaps& caps;

    int residual(const Pinning& p) const {
        int r = 0;
        for (int v : t.sphere)
            if (!p.contains(v)) ++r;
        return r;
    }

    int make(Pinning sigma, Pinning tau, int parent, int pv, int cs, int ct, int bad) {
        if (static_cast<long long>(t.nodes.size()) >= caps.max_nodes)
            fail(ErrorClass::size_cap, "coupling tree exceeds node cap");
        int id = static_cast<int>(t.nodes.size());
        TreeNode nd;
        nd.resid = residual(sigma);
        nd.sigma = std::move(sigma);
        nd.tau = std::move(tau);
        nd.parent = parent;
        nd.pinned_vertex = pv;
        nd.c_sigma = cs;
        nd.c_tau = ct;
        nd.bad_vertex = bad;
        t.nodes.push_back(std::move(nd));
        if (bad >= 0) return id;

        for (int v : t.sphere) {
            if (t.nodes[id].sigma.contains(v)) continue;
            auto sup_s = support(m, t.nodes[id].sigma, v);
            auto sup_t = support(m, t.nodes[id].tau, v);
            if (sup_s.empty() || sup_t.empty())
                fail(ErrorClass::non_permissive, "empty sphere-vertex support during tree build");
            for (int c1 : sup_s)
                for (int c2 : sup_t) {
                    int child;
                    if (c1 == c2) {
                        child = make(t.nodes[id].sigma.extend(v, c1), t.nodes[id].tau.extend(v, c1),
                                     id, v, c1, c2, -1);
                    } else {
                        child = make(t.nodes[id].sigma.extend(v, c1), t.nodes[id].tau.extend(v, c2),
                                     id, v, c1, c2, v);
                    }
                    t.nodes[id].children.push_back(child);
                }
        }
        return id;
    }
};

} // namespace

CouplingTree build_coupling_tree(const SpinModel& m, const Pinning& sigma, const Pinning& tau,
                                 int u, int R, TreeCaps caps) {
    auto diff = diff_vertices(sigma, tau);
    if (diff.size() != 1 || diff[0] != u)
        fail(ErrorClass::usage, "tree root pinnings must differ exactly at u");
    if (R < 1) fail(ErrorClass::usage, "tree radius must be >= 1");
    CouplingTree t;
    t.u = u;
    t.R = R;
    t.sphere = m.graph.sphere(u, R);
    Builder b{m, t, caps};
    b.make(sigma, tau, -1, -1, -1, -1, -1);
    return t;
}

std::string serialize_tree(const CouplingTree& t) {
    std::ostringstream os;
    os << "u " << t.u << " R " << t.R << " sphere";
    for (int v : t.sphere) os << " " << v;
    os << "\n";
    for (int w = 0; w < t.size(); ++w) {
        const TreeNode& nd = t.nodes[w];
        os << w << " parent " << nd.parent << " kind ";
        switch (t.kind(w)) {
            case NodeKind::internal: os << "internal"; break;
            case NodeKind::good_leaf: os << "good"; break;
            case NodeKind::bad_leaf: os << "bad"; break;
        }
        os << " resid " << nd.resid << " D " << nd.bad_vertex << " sigma";
        for (auto& [v, c] : nd.sigma.items()) os << " " << v << ":" << c;
        os << " tau";
        for (auto& [v, c] : nd.tau.items()) os << " " << v << ":" << c;
        os << "\n";
    }
    return os.str();
}

} // namespace spinsys
