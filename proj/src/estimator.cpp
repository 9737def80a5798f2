#include "spinsys/estimator.hpp"

#include <algorithm>

#include "spinsys/error.hpp"

namespace spinsys {

namespace {

Rat decay_rate(const Rat& C, int R) {
    // 2C * 2^-ceil(R / 2C)
    BigInt num = numerator(C), den = denominator(C);
    BigInt k = (BigInt(R) * den + 2 * num - 1) / (2 * num); // ceil(R*den / (2*num))
    Rat pow2 = Rat(BigInt(1) << k.convert_to<unsigned>());
    return 2 * C / pow2;
}

} // namespace

std::pair<int, Rat> select_R(const Rat& C, const Rat& b, int Delta) {
    if (C <= 0 || b <= 0 || b >= 1 || Delta < 1) fail(ErrorClass::usage, "bad select_R arguments");
    Rat b4 = b * b * b * b;
    BigInt pw = 1;
    for (int R = 1; R <= 1000000; ++R) {
        pw *= Delta;
        Rat dR = decay_rate(C, R);
        if (30 * dR * harmonic_upper(pw) < b4) return {R, dR / b};
    }
    fail(ErrorClass::solver, "select_R did not terminate");
}

ParamSet theoretical_params(const Rat& C, const Rat& b, int Delta) {
    auto [R, eta] = select_R(C, b, Delta);
    ParamSet p;
    p.mode = ParamMode::theoretical;
    p.R = R;
    p.eta = eta;
    p.C = C;
    p.b = b;
    p.guarantees_valid = true;
    return p;
}

Rat measured_influence(const Oracle& oracle, int radius) {
    const SpinModel& m = oracle.model();
    Rat worst = 0;
    bool symmetric = m.colour_symmetric();
    for (int v = 0; v < m.n(); ++v) {
        if (m.graph.sphere(v, radius).empty()) continue;
        std::vector<std::pair<int, int>> pairs;
        if (symmetric) {
            pairs.push_back({0, 1});
        } else {
            for (int c1 = 0; c1 < m.q; ++c1)
                for (int c2 = c1 + 1; c2 < m.q; ++c2) pairs.push_back({c1, c2});
        }
        for (auto [c1, c2] : pairs) {
            Pinning s = Pinning().extend(v, c1);
            Pinning t = Pinning().extend(v, c2);
            Rat ti = oracle.total_influence(s, t, v, radius);
            if (ti > worst) worst = ti;
        }
    }
    return worst;
}

ParamSet measured_params(const Oracle& oracle) {
    const SpinModel& m = oracle.model();
    Rat b = oracle.marginal_lower_bound();
    if (b <= 0) fail(ErrorClass::non_permissive, "measured marginal bound is zero");
    Rat b4 = b * b * b * b;
    int Delta = std::max(1, m.graph.max_degree());
    int rmax = m.graph.diameter() + 1;
    BigInt pw = 1;
    for (int R = 1; R <= rmax; ++R) {
        pw *= Delta;
        Rat dR = measured_influence(oracle, R);
        if (30 * dR * harmonic_upper(pw) < b4) {
            ParamSet p;
            p.mode = ParamMode::measured;
            p.R = R;
            p.eta = dR / b;
            p.b = b;
            p.guarantees_valid = true;
            return p;
        }
    }
    fail(ErrorClass::solver, "no radius satisfied the measured selection inequality");
}

Rat eps_schedule(int k, const Rat& b) {
    if (k < 0) fail(ErrorClass::usage, "negative depth");
    if (k == 0) return 1 / b;
    return Rat(2) / (BigInt(1) << k);
}

RecursiveEstimator::RecursiveEstimator(const SpinModel& m, ParamSet params, EstOptions opts)
    : m_(m), params_(std::move(params)), opts_(opts), oracle_(m, opts.oracle_caps) {
    if (params_.b <= 0 || params_.b >= 1)
        fail(ErrorClass::usage, "parameter set needs b in (0,1)");
    if (params_.R < 1) fail(ErrorClass::usage, "parameter set needs R >= 1");
    if (params_.eta < 0) fail(ErrorClass::usage, "parameter set needs eta >= 0");
}

int RecursiveEstimator::residual_sphere(const Pinning& pin, int u) const {
    int r = 0;
    for (int v : m_.graph.sphere(u, params_.R))
        if (!pin.contains(v)) ++r;
    return r;
}

Rat RecursiveEstimator::ratio(const Pinning& sigma, const Pinning& tau, int k, int u) {
    ++stats_.calls;
    auto diff = diff_vertices(sigma, tau);
    if (diff.size() != 1 || diff[0] != u)
        fail(ErrorClass::usage, "estimator pinnings must differ exactly at u");
    if (k <= 0) return Rat(1);
    if (residual_sphere(sigma, u) == 0) {
        ++stats_.brute_count;
        return oracle_.ratio(sigma, tau);
    }

    std::string key;
    if (opts_.memoize) {
        key = sigma.encode() + "|" + tau.encode() + "|" + std::to_string(k) + "|" +
              std::to_string(u);
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            ++stats_.memo_hits;
            return it->second;
        }
    }

    CouplingTree tree = build_coupling_tree(m_, sigma, tau, u, params_.R, opts_.tree_caps);
    ++stats_.trees_built;
    stats_.max_tree_nodes = std::max(stats_.max_tree_nodes, tree.size());

    RatioVector ratios = RatioVector::sized(tree.size());
    for (int w = 0; w < tree.size(); ++w) {
        const TreeNode& nd = tree.nodes[w];
        switch (tree.kind(w)) {
            case NodeKind::internal: break;
            case NodeKind::good_leaf:
                ++stats_.brute_count;
                ratios.value[w] = oracle_.ratio(nd.sigma, nd.tau);
                ratios.exact[w] = 1;
                break;
            case NodeKind::bad_leaf: {
                int v = nd.bad_vertex;
                Pinning gamma = nd.sigma.reassign(u, nd.tau.at(u));
                Rat x = ratio(nd.sigma, gamma, k - 1, u);
                Rat y = ratio(gamma, nd.tau, k - 1, v);
                ratios.value[w] = x * y;
                break;
            }
        }
    }

    Rat ek1 = eps_schedule(k - 1, params_.b);
    Rat margin = 2 * ek1 + ek1 * ek1;
    EstimatorOptions eo;
    eo.loose_eps_hat = opts_.loose_eps_hat;
    MarginalEstimatorStats mst;
    Rat out = marginal_estimator(m_, tree, ratios, margin, params_.b, params_.eta, params_.R,
                                 std::max(1, m_.graph.max_degree()), eo, &mst);
    stats_.lp_count += mst.lp_calls;
    if (opts_.memoize) memo_.emplace(std::move(key), out);
    return out;
}

std::vector<Rat> RecursiveEstimator::marginal(const Pinning& pin, int v, int k) {
    auto sup = support(m_, pin, v);
    if (sup.empty()) fail(ErrorClass::infeasible_pinning, "empty support at free vertex");
    std::vector<Rat> rho(m_.q, Rat(0));
    int c0 = sup[0];
    rho[c0] = 1;
    Rat total = 1;
    Pinning ref = pin.extend(v, c0);
    for (size_t i = 1; i < sup.size(); ++i) {
        int c = sup[i];
        rho[c] = ratio(pin.extend(v, c), ref, k, v);
        total += rho[c];
    }
    std::vector<Rat> out(m_.q, Rat(0));
    for (int c : sup) out[c] = rho[c] / total;
    return out;
}

PartitionResult RecursiveEstimator::partition(const Rat& eps) {
    if (eps <= 0 || eps >= 1) fail(ErrorClass::usage, "partition error bound must be in (0,1)");
    int n = m_.n();
    // k = ceil(log2(n / eps)) + 1
    int k = 1;
    {
        Rat target = Rat(n) / eps;
        Rat p = 1;
        int k0 = 0;
        while (p < target) {
            p *= 2;
            ++k0;
        }
        k = k0 + 1;
    }
    // greedy reference configuration, lowest supported colour per vertex
    Pinning pin;
    Config xstar(n, -1);
    for (int v = 0; v < n; ++v) {
        auto sup = support(m_, pin, v);
        if (sup.empty())
            fail(ErrorClass::non_permissive, "greedy reference configuration failed");
        xstar[v] = sup[0];
        pin = pin.extend(v, sup[0]);
    }

    Rat zhat = weight(m_, xstar);
    if (zhat == 0) fail(ErrorClass::non_permissive, "reference configuration has zero weight");
    Pinning prefix;
    for (int v = 0; v < n; ++v) {
        auto mu = marginal(prefix, v, k);
        if (mu[xstar[v]] <= 0) fail(ErrorClass::non_permissive, "estimated marginal vanished");
        zhat /= mu[xstar[v]];
        prefix = prefix.extend(v, xstar[v]);
    }

    PartitionResult res;
    res.z_hat = zhat;
    res.params = params_;
    res.depth = k;
    res.guarantee_valid = params_.guarantees_valid && params_.mode != ParamMode::manual;
    res.stats = stats_;
    return res;
}

PartitionResult estimate_partition(const SpinModel& m, const Rat& eps, const ParamSet& params,
                                   EstOptions opts) {
    RecursiveEstimator est(m, params, opts);
    return est.partition(eps);
}

} // namespace spinsys
