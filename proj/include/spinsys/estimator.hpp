// The full recursive marginal-ratio estimator, parameter selection, marginal
// reconstruction from ratios, and partition-function estimation by
// self-reduction.
#pragma once

#include <optional>
#include <unordered_map>

#include "spinsys/couptree.hpp"
#include "spinsys/lp.hpp"
#include "spinsys/oracle.hpp"

namespace spinsys {

enum class ParamMode { theoretical, measured, manual };

struct ParamSet {
    ParamMode mode = ParamMode::manual;
    int R = 1;
    Rat eta = 0;
    Rat C = 0; // coupling-independence constant (theoretical mode input)
    Rat b = 0; // marginal lower bound
    bool guarantees_valid = false;
};

// Smallest R with 30 * delta(R) * H(Delta^R) < b^4 where
// delta(x) = 2C * 2^-ceil(x / 2C); returns (R, eta = delta(R) / b).
// H is evaluated through an upper bound, which keeps the selection sound.
std::pair<int, Rat> select_R(const Rat& C, const Rat& b, int Delta);

ParamSet theoretical_params(const Rat& C, const Rat& b, int Delta);

// Max over vertices v and colour pairs (c1,c2) of the total influence at the
// given radius between the pinnings {v->c1} and {v->c2}. Colour-symmetric
// models are measured on a single representative pair.
Rat measured_influence(const Oracle& oracle, int radius);

// Measured-mode parameters: b from the oracle's certified bound, R the first
// radius whose measured influence satisfies the selection inequality.
ParamSet measured_params(const Oracle& oracle);

// eps(0) = 1/b, eps(k) = 2^(1-k)
Rat eps_schedule(int k, const Rat& b);

struct EstimatorStats {
    long long calls = 0;
    long long memo_hits = 0;
    long long lp_count = 0;
    long long brute_count = 0;
    long long trees_built = 0;
    int max_tree_nodes = 0;
};

struct PartitionResult {
    Rat z_hat;
    ParamSet params;
    int depth = 0;
    bool guarantee_valid = false;
    EstimatorStats stats;
};

struct EstOptions {
    bool memoize = true;
    bool loose_eps_hat = false;
    TreeCaps tree_caps;
    OracleCaps oracle_caps;
};

class RecursiveEstimator {
  public:
    RecursiveEstimator(const SpinModel& m, ParamSet params, EstOptions opts = {});

    // Estimate of mu_L(sigma) / mu_L(tau) for pinnings differing exactly at
    // u, truncated at recursion depth k. Exact (via local brute force) when
    // the sphere around u is fully pinned.
    Rat ratio(const Pinning& sigma, const Pinning& tau, int k, int u);

    // Marginal at v from q-1 ratio estimates against a reference colour.
    std::vector<Rat> marginal(const Pinning& pin, int v, int k);

    // Self-reduction along a greedy reference configuration;
    // depth k = ceil(log2(n / eps)) + 1.
    PartitionResult partition(const Rat& eps);

    const EstimatorStats& stats() const { return stats_; }
    const ParamSet& params() const { return params_; }

  private:
    int residual_sphere(const Pinning& pin, int u) const;

    const SpinModel& m_;
    ParamSet params_;
    EstOptions opts_;
    Oracle oracle_;
    EstimatorStats stats_;
    std::unordered_map<std::string, Rat> memo_;
};

PartitionResult estimate_partition(const SpinModel& m, const Rat& eps, const ParamSet& params,
                                   EstOptions opts = {});

} // namespace spinsys
