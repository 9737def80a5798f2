#include "spinsys/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "spinsys/error.hpp"

namespace spinsys {

Rat harmonic(long long k) {
    if (k < 0) fail(ErrorClass::usage, "harmonic of negative argument");
    if (k > 3000) fail(ErrorClass::usage, "exact harmonic limited to k <= 3000");
    Rat h = 0;
    for (long long i = 1; i <= k; ++i) h += Rat(1) / i;
    return h;
}

Rat harmonic_upper(const BigInt& k) {
    if (k <= 0) return Rat(0);
    if (k <= 3000) return harmonic(k.convert_to<long long>());
    // H(k) <= ln k + 1 <= ln2 * bitlength(k) + 1
    double lk = 0.6931471805599454 * (static_cast<double>(boost::multiprecision::msb(k)) + 1.0);
    return Rat(std::nextafter(lk + 1.0, 1e308));
}

namespace {

void check_ratios(const CouplingTree& t, const RatioVector& ratios) {
    if (static_cast<int>(ratios.value.size()) < t.size())
        fail(ErrorClass::usage, "ratio vector missing leaves");
    for (int w = 0; w < t.size(); ++w)
        if (t.kind(w) != NodeKind::internal && ratios.value[w] <= 0)
            fail(ErrorClass::usage, "leaf ratio must be positive");
}

// good leaves: [r_lo / R_w, r_hi / R_w]; bad leaves widen both sides by 1+eps
std::pair<Rat, Rat> leaf_bounds(const CouplingTree& t, const RatioVector& ratios,
                                const LpParams& p, int w) {
    const Rat& rw = ratios.value[w];
    if (t.kind(w) == NodeKind::good_leaf) return {p.r_lo / rw, p.r_hi / rw};
    Rat one_eps = 1 + p.eps;
    return {p.r_lo / (one_eps * rw), p.r_hi * one_eps / rw};
}

} // namespace

DenseLP<Rat> build_tree_lp(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                           const LpParams& p) {
    if (p.r_lo <= 0 || p.r_hi < p.r_lo) fail(ErrorClass::usage, "need 0 < r_lo <= r_hi");
    if (p.eps < 0 || p.eta < 0) fail(ErrorClass::usage, "eps and eta must be nonnegative");
    check_ratios(t, ratios);
    DenseLP<Rat> lp;
    lp.nvars = 2 * t.size();
    auto xv = [](int w) { return 2 * w; };
    auto yv = [](int w) { return 2 * w + 1; };

    lp.add_row({{xv(0), Rat(1)}}, RowType::eq, Rat(1));
    lp.add_row({{yv(0), Rat(1)}}, RowType::eq, Rat(1));

    for (int w = 0; w < t.size(); ++w) {
        const TreeNode& nd = t.nodes[w];
        switch (t.kind(w)) {
            case NodeKind::internal: {
                Rat inv_l = Rat(1) / nd.resid;
                // recursive constraints, one per (side, residual vertex, colour)
                for (int v : t.sphere) {
                    if (nd.sigma.contains(v)) continue;
                    for (int c : support(m, nd.sigma, v)) {
                        std::vector<std::pair<int, Rat>> row{{xv(w), -inv_l}};
                        for (int ch : nd.children)
                            if (t.nodes[ch].pinned_vertex == v && t.nodes[ch].c_sigma == c)
                                row.push_back({xv(ch), Rat(1)});
                        lp.add_row(std::move(row), RowType::eq, Rat(0));
                    }
                    for (int c : support(m, nd.tau, v)) {
                        std::vector<std::pair<int, Rat>> row{{yv(w), -inv_l}};
                        for (int ch : nd.children)
                            if (t.nodes[ch].pinned_vertex == v && t.nodes[ch].c_tau == c)
                                row.push_back({yv(ch), Rat(1)});
                        lp.add_row(std::move(row), RowType::eq, Rat(0));
                    }
                }
                // overflow constraints
                std::vector<std::pair<int, Rat>> ox{{xv(w), -p.eta * inv_l}};
                std::vector<std::pair<int, Rat>> oy{{yv(w), -p.eta * inv_l}};
                for (int ch : nd.children)
                    if (t.kind(ch) == NodeKind::bad_leaf) {
                        ox.push_back({xv(ch), Rat(1)});
                        oy.push_back({yv(ch), Rat(1)});
                    }
                lp.add_row(std::move(ox), RowType::le, Rat(0));
                lp.add_row(std::move(oy), RowType::le, Rat(0));
                break;
            }
            case NodeKind::good_leaf:
            case NodeKind::bad_leaf: {
                auto [lo, hi] = leaf_bounds(t, ratios, p, w);
                lp.add_row({{xv(w), Rat(1)}, {yv(w), -lo}}, RowType::ge, Rat(0));
                lp.add_row({{xv(w), Rat(1)}, {yv(w), -hi}}, RowType::le, Rat(0));
                break;
            }
        }
    }
    return lp;
}

std::string dump_tree_lp(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                         const LpParams& p) {
    DenseLP<Rat> lp = build_tree_lp(m, t, ratios, p);
    auto var_name = [](int j) {
        return std::string(j % 2 == 0 ? "x" : "y") + std::to_string(j / 2);
    };
    std::ostringstream os;
    os << "\\ coupling tree LP: nodes=" << t.size() << " r_lo=" << rat_to_string(p.r_lo)
       << " r_hi=" << rat_to_string(p.r_hi) << " eps=" << rat_to_string(p.eps)
       << " eta=" << rat_to_string(p.eta) << "\n";
    os << "Minimize\n obj: 0\nSubject To\n";
    for (size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& r = lp.rows[i];
        os << " c" << i << ":";
        for (auto& [j, c] : r.coef) {
            if (c >= 0) os << " +";
            else os << " -";
            os << rat_to_string(abs(c)) << " " << var_name(j);
        }
        switch (r.type) {
            case RowType::le: os << " <= "; break;
            case RowType::ge: os << " >= "; break;
            case RowType::eq: os << " = "; break;
        }
        os << rat_to_string(r.rhs) << "\n";
    }
    os << "Bounds\n";
    for (int j = 0; j < lp.nvars; ++j) os << " 0 <= " << var_name(j) << "\n";
    os << "End\n";
    return os.str();
}

namespace {

// Feasible (x_w, y_w) of the subtree below a node: either the origin only, or
// a closed sector of slopes x/y in [lo, hi].
struct Cone {
    bool zero_only = false;
    Rat lo, hi;
};

template <class T>
struct TypedParams {
    T r_lo, r_hi, eps, eta, one;
};

// Bottom-up sector computation over distinct labels.
template <class T>
class SectorSolver {
  public:
    SectorSolver(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                 const LpParams& p, T tol)
        : m_(m), t_(t), ratios_(ratios), tol_(tol) {
        p_.r_lo = conv(p.r_lo);
        p_.r_hi = conv(p.r_hi);
        p_.eps = conv(p.eps);
        p_.eta = conv(p.eta);
        p_.one = T(1);
    }

    static T conv(const Rat& r) {
        if constexpr (std::is_same_v<T, Rat>) return r;
        else return static_cast<T>(rat_to_double(r));
    }

    bool root_feasible() {
        if (t_.kind(0) != NodeKind::internal) {
            auto s = leaf_sector(0);
            return !(T(1) < s.first - tol_ || s.second + tol_ < T(1));
        }
        DenseLP<T> lp = local_lp(0);
        int l = t_.nodes[0].resid;
        lp.add_row({{0, T(1)}}, RowType::eq, T(l));
        Simplex<T> sx(lp, tol_);
        return sx.feasible();
    }

  private:
    struct TCone {
        bool zero_only = false;
        T lo{}, hi{};
    };

    std::pair<T, T> leaf_sector(int w) {
        T rw = conv(ratios_.value[w]);
        if (t_.kind(w) == NodeKind::good_leaf) return {p_.r_lo / rw, p_.r_hi / rw};
        return {p_.r_lo / ((p_.one + p_.eps) * rw), p_.r_hi * (p_.one + p_.eps) / rw};
    }

    TCone cone(int w) {
        if (t_.kind(w) != NodeKind::internal) {
            auto [lo, hi] = leaf_sector(w);
            return {false, lo, hi};
        }
        std::string key = t_.nodes[w].sigma.encode() + "|" + t_.nodes[w].tau.encode();
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        DenseLP<T> lp = local_lp(w);
        int l = t_.nodes[w].resid;
        TCone out;
        Simplex<T> sx(lp, tol_);
        if (!sx.feasible()) {
            out.zero_only = true;
        } else {
            auto mn = sx.minimize({{0, T(1)}});
            auto mx = sx.maximize({{0, T(1)}});
            if (!mn || !mx) fail(ErrorClass::solver, "sector LP unbounded");
            out.lo = *mn / l;
            out.hi = *mx / l;
        }
        memo_.emplace(std::move(key), out);
        return out;
    }

    // Local constraint system of an internal node with children replaced by
    // their cones. y_w is normalized to l(w); variable 0 is x_w.
    DenseLP<T> local_lp(int w) {
        const TreeNode& nd = t_.nodes[w];
        int l = nd.resid;
        T inv_l = p_.one / T(l);
        DenseLP<T> lp;
        lp.nvars = 1;
        // child lookup
        std::map<std::tuple<int, int, int>, int> child_at; // (v, c_sigma, c_tau) -> node
        for (int ch : nd.children)
            child_at[{t_.nodes[ch].pinned_vertex, t_.nodes[ch].c_sigma, t_.nodes[ch].c_tau}] = ch;

        std::vector<std::pair<int, T>> xbudget{{0, T(0)}}; // coef filled later
        std::vector<std::pair<int, T>> ybudget;
        T sum_a = T(0), sum_b = T(0);

        for (int v : t_.sphere) {
            if (nd.sigma.contains(v)) continue;
            auto sup_s = support(m_, nd.sigma, v);
            auto sup_t = support(m_, nd.tau, v);
            sum_a += T(static_cast<int>(sup_s.size()));
            sum_b += T(static_cast<int>(sup_t.size()));

            // diagonal child variables (x_c, y_c) where the subtree cone is
            // not degenerate
            std::map<int, std::pair<int, TCone>> diag; // colour -> (x var id, cone)
            for (int c : sup_s) {
                auto itd = child_at.find({v, c, c});
                if (itd == child_at.end()) continue;
                TCone cc = cone(itd->second);
                if (cc.zero_only) continue;
                int xid = lp.nvars;
                lp.nvars += 2; // x then y
                diag[c] = {xid, cc};
            }
            // bad-leaf y-variables
            std::map<std::pair<int, int>, int> ym; // (c1,c2) -> var id
            for (int c1 : sup_s)
                for (int c2 : sup_t) {
                    if (c1 == c2) continue;
                    auto itb = child_at.find({v, c1, c2});
                    if (itb == child_at.end()) fail(ErrorClass::solver, "missing bad leaf child");
                    ym[{c1, c2}] = lp.nvars++;
                }

            // y-family equalities
            for (int c2 : sup_t) {
                std::vector<std::pair<int, T>> row;
                auto itd = diag.find(c2);
                if (itd != diag.end() &&
                    std::find(sup_s.begin(), sup_s.end(), c2) != sup_s.end())
                    row.push_back({itd->second.first + 1, T(1)});
                for (int c1 : sup_s)
                    if (c1 != c2) row.push_back({ym[{c1, c2}], T(1)});
                lp.add_row(std::move(row), RowType::eq, T(1));
            }
            // x-family interval rows
            for (int c1 : sup_s) {
                std::vector<std::pair<int, T>> lo_row{{0, -inv_l}};
                std::vector<std::pair<int, T>> hi_row{{0, inv_l}};
                auto itd = diag.find(c1);
                if (itd != diag.end()) {
                    lo_row.push_back({itd->second.first, T(1)});
                    hi_row.push_back({itd->second.first, T(-1)});
                }
                for (int c2 : sup_t) {
                    if (c2 == c1) continue;
                    int child = child_at[{v, c1, c2}];
                    auto [lo, hi] = leaf_sector(child);
                    lo_row.push_back({ym[{c1, c2}], lo});
                    hi_row.push_back({ym[{c1, c2}], -hi});
                }
                lp.add_row(std::move(lo_row), RowType::le, T(0));
                lp.add_row(std::move(hi_row), RowType::le, T(0));
            }
            // diagonal sector rows and budget contributions
            for (auto& [c, entry] : diag) {
                int xid = entry.first;
                const TCone& cc = entry.second;
                lp.add_row({{xid, T(-1)}, {xid + 1, cc.lo}}, RowType::le, T(0));
                lp.add_row({{xid, T(1)}, {xid + 1, -cc.hi}}, RowType::le, T(0));
                xbudget.push_back({xid, T(-1)});
                ybudget.push_back({xid + 1, T(1)});
            }
        }
        // overflow budgets: sum of bad x-mass = sum_a * x_w / l - sum diag x,
        // bounded by (eta / l) * x_w
        xbudget[0].second = (sum_a - p_.eta) * inv_l;
        lp.add_row(std::move(xbudget), RowType::le, T(0));
        lp.add_row(std::move(ybudget), RowType::ge, sum_b - p_.eta);
        return lp;
    }

    const SpinModel& m_;
    const CouplingTree& t_;
    const RatioVector& ratios_;
    TypedParams<T> p_;
    T tol_;
    std::unordered_map<std::string, TCone> memo_;
};

// Same-label nodes must carry identical leaf ratios for the label memo to be
// valid; the recursive estimator guarantees it and we verify.
void check_label_consistency(const CouplingTree& t, const RatioVector& ratios) {
    std::unordered_map<std::string, Rat> leaf_ratio;
    for (int w = 0; w < t.size(); ++w) {
        if (t.kind(w) == NodeKind::internal) continue;
        std::string key = t.nodes[w].sigma.encode() + "|" + t.nodes[w].tau.encode();
        auto [it, fresh] = leaf_ratio.emplace(std::move(key), ratios.value[w]);
        if (!fresh && it->second != ratios.value[w])
            fail(ErrorClass::usage, "same-label leaves carry different ratios");
    }
}

} // namespace

bool lp_feasible(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                 const LpParams& p, const LpOptions& opts) {
    if (p.r_lo <= 0 || p.r_hi < p.r_lo) fail(ErrorClass::usage, "need 0 < r_lo <= r_hi");
    if (p.eps < 0 || p.eta < 0) fail(ErrorClass::usage, "eps and eta must be nonnegative");
    check_ratios(t, ratios);
    if (opts.float_mode) {
        if (opts.strategy == LpStrategy::direct) {
            DenseLP<Rat> lp = build_tree_lp(m, t, ratios, p);
            DenseLP<double> dlp;
            dlp.nvars = lp.nvars;
            for (auto& r : lp.rows) {
                DenseLP<double>::Row dr;
                for (auto& [j, c] : r.coef) dr.coef.push_back({j, rat_to_double(c)});
                dr.type = r.type;
                dr.rhs = rat_to_double(r.rhs);
                dlp.rows.push_back(std::move(dr));
            }
            Simplex<double> sx(dlp, opts.float_tol);
            return sx.feasible();
        }
        check_label_consistency(t, ratios);
        SectorSolver<double> solver(m, t, ratios, p, opts.float_tol);
        return solver.root_feasible();
    }
    if (opts.strategy == LpStrategy::direct) {
        DenseLP<Rat> lp = build_tree_lp(m, t, ratios, p);
        Simplex<Rat> sx(lp);
        return sx.feasible();
    }
    check_label_consistency(t, ratios);
    SectorSolver<Rat> solver(m, t, ratios, p, Rat(0));
    return solver.root_feasible();
}

Rat eps_hat_value(const Rat& eps, const Rat& b, const Rat& eta, int R, int Delta, bool loose) {
    BigInt m = 1;
    for (int i = 0; i < R; ++i) m *= Delta;
    Rat h = harmonic_upper(m);
    Rat v = eta * h * eps;
    if (!loose) v *= 5 / (b * b);
    return v;
}

Rat marginal_estimator(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                       const Rat& eps, const Rat& b, const Rat& eta, int R, int Delta,
                       const EstimatorOptions& opts, MarginalEstimatorStats* stats) {
    if (b <= 0 || b >= 1) fail(ErrorClass::usage, "b must lie in (0,1)");
    if (eps > 3 / (b * b)) fail(ErrorClass::usage, "eps exceeds 3 b^-2");
    Rat eps_hat = eps_hat_value(eps, b, eta, R, Delta, opts.loose_eps_hat);
    Rat r_low = b, r_upp = 1 / b;
    Rat bound = (1 + eps_hat) * (1 + eps_hat);
    MarginalEstimatorStats st;

    auto run_lp = [&](const Rat& lo, const Rat& hi) {
        ++st.lp_calls;
        LpParams p{lo, hi, eps, eta};
        if (!opts.float_mode) return lp_feasible(m, t, ratios, p);
        LpOptions lo_opts;
        lo_opts.float_mode = true;
        lo_opts.float_tol = opts.float_tol;
        return lp_feasible(m, t, ratios, p, lo_opts);
    };

    while (r_upp > bound * r_low) {
        ++st.iterations;
        if (st.iterations > 4096) fail(ErrorClass::solver, "binary search iteration cap hit");
        Rat mid = (r_low + r_upp) / 2;
        bool lo_ok = run_lp(r_low, mid);
        bool hi_ok = run_lp(mid, r_upp);
        if (lo_ok && hi_ok) {
            st.early_exit = true;
            if (stats) *stats = st;
            return mid;
        }
        if (lo_ok) {
            r_upp = mid;
        } else if (hi_ok) {
            r_low = mid;
        } else if (opts.float_mode) {
            // float slack may starve both sides: widen, then go exact
            double tol = opts.float_tol;
            bool resolved = false;
            while (tol < 1e-6) {
                tol *= 10;
                LpOptions widened;
                widened.float_mode = true;
                widened.float_tol = tol;
                lo_ok = lp_feasible(m, t, ratios, {r_low, mid, eps, eta}, widened);
                hi_ok = lp_feasible(m, t, ratios, {mid, r_upp, eps, eta}, widened);
                st.lp_calls += 2;
                if (lo_ok || hi_ok) {
                    resolved = true;
                    break;
                }
            }
            if (!resolved) {
                lo_ok = lp_feasible(m, t, ratios, {r_low, mid, eps, eta});
                hi_ok = lp_feasible(m, t, ratios, {mid, r_upp, eps, eta});
                st.lp_calls += 2;
            }
            if (lo_ok && hi_ok) {
                st.early_exit = true;
                if (stats) *stats = st;
                return mid;
            }
            if (lo_ok) r_upp = mid;
            else if (hi_ok) r_low = mid;
            else fail(ErrorClass::bracketing, "both binary-search LPs infeasible");
        } else {
            fail(ErrorClass::bracketing, "both binary-search LPs infeasible");
        }
    }
    if (stats) *stats = st;
    return rat_sqrt_approx(r_low * r_upp);
}

} // namespace spinsys
