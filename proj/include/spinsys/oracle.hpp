// Exact brute-force oracle: conditional partition functions, marginals,
// marginal ratios, TV and Hamming-W1 distances, total influence, and the
// certified marginal lower bound. Ground truth for every acceptance test and
// the base case of the recursive estimator.
#pragma once

#include <unordered_map>
#include <vector>

#include "spinsys/model.hpp"

namespace spinsys {

struct OracleCaps {
    // Max number of free vertices per enumeration; -1 picks the default
    // floor(20 * ln 2 / ln q).
    int max_free = -1;
    // Cap on the per-side support size of the W1 transportation problem.
    long long max_w1_states = 20000;

    int resolved_max_free(int q) const;
};

std::vector<int> diff_vertices(const Pinning& a, const Pinning& b);

class Oracle {
  public:
    explicit Oracle(const SpinModel& m, OracleCaps caps = {});

    const SpinModel& model() const { return *m_; }

    // Z^pin = sum over completions of the free vertices of the conditional
    // weight. Factorizes over free components; component sums are cached by
    // (component, boundary values).
    Rat Z(const Pinning& pin) const;

    // mu^pin_v as a q-vector. Enumeration restricted to the free component
    // containing v. Errors: non-permissive (component sum zero), size cap.
    std::vector<Rat> marginal(const Pinning& pin, int v) const;

    // Marginals of every free vertex in one pass; entry is empty for pinned
    // vertices.
    std::vector<std::vector<Rat>> marginal_table(const Pinning& pin) const;

    // mu_L(sigma) / mu_L(tau) for pinnings on the same domain. Computed as
    // the pinned-weight ratio times the product of conditional sums over the
    // free components whose boundary values differ.
    Rat ratio(const Pinning& sigma, const Pinning& tau) const;

    // Unnormalized marginal mass: pinned_weight(pin) * Z^pin. Ratios of these
    // over a common domain are marginal ratios.
    Rat mass(const Pinning& pin) const;

    // Exact 1-Wasserstein distance under the Hamming metric on the unpinned
    // coordinates, solved as an exact transportation problem over the two
    // supports. Domains of sigma and tau must coincide.
    Rat w1_hamming(const Pinning& sigma, const Pinning& tau) const;

    // sum_{u in S_l(v), u free} d_TV(mu^sigma_u, mu^tau_u); sigma and tau
    // must differ exactly at v.
    Rat total_influence(const Pinning& sigma, const Pinning& tau, int v, int l) const;

    // total_influence for l = 1..lmax (index 0 of the result is l=1).
    std::vector<Rat> influence_profile(const Pinning& sigma, const Pinning& tau, int v,
                                       int lmax) const;

    // Certified lower bound b <= mu^pin_v(c) over all pinnings, free v and
    // supported c: minimizes the local marginal over every combination of
    // neighbour statuses (pinned with any colour, or free with any weight
    // profile induced by pinning the distance-2 boundary).
    Rat marginal_lower_bound() const;

    static Rat tv(const std::vector<Rat>& p, const std::vector<Rat>& q);

  private:
    struct CompResult {
        Rat z;
        std::vector<std::vector<Rat>> acc; // per comp-local vertex index, per colour
    };

    std::vector<std::vector<int>> free_components(const Pinning& pin) const;
    CompResult enumerate_component(const Pinning& pin, const std::vector<int>& comp,
                                   bool want_marginals) const;
    Rat component_z(const Pinning& pin, const std::vector<int>& comp) const;
    void check_cap(size_t total_free) const;

    const SpinModel* m_;
    OracleCaps caps_;
    mutable std::unordered_map<std::string, Rat> comp_cache_;
};

} // namespace spinsys
