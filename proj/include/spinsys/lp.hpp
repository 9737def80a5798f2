// Feasibility LP over a coupling tree and the binary-search marginal
// estimator built on it.
//
// Rational mode decides feasibility exactly. The default strategy projects
// the tree constraint system bottom-up: the feasible (x_w, y_w) pairs of a
// subtree form a polyhedral cone in the plane, represented by its slope
// interval and computed by two small exact simplex solves per distinct node
// label. The direct strategy solves the literal LP in one piece; both must
// agree and the tests check that.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinsys/couptree.hpp"
#include "spinsys/model.hpp"
#include "spinsys/simplex.hpp"

namespace spinsys {

// H(k) = sum 1/i, H(0) = 0. Exact up to k = 3000.
Rat harmonic(long long k);
// Upper bound on H(k) usable for arbitrary k (exact when small, ln k + 1
// rounded up otherwise).
Rat harmonic_upper(const BigInt& k);

// Marginal ratio per leaf node; entries for non-leaf ids are ignored.
struct RatioVector {
    std::vector<Rat> value;
    std::vector<char> exact;

    static RatioVector sized(int n) { return {std::vector<Rat>(n, Rat(0)), std::vector<char>(n, 0)}; }
};

struct LpParams {
    Rat r_lo, r_hi;
    Rat eps;  // leaf ratio error margin
    Rat eta;  // overflow budget
};

enum class LpStrategy { sector, direct };

struct LpOptions {
    LpStrategy strategy = LpStrategy::sector;
    bool float_mode = false;
    double float_tol = 1e-9;
};

// The literal constraint system: variables x_w = 2w, y_w = 2w+1.
DenseLP<Rat> build_tree_lp(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                           const LpParams& p);

// LP-format text (objective 0) of the literal system.
std::string dump_tree_lp(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                         const LpParams& p);

bool lp_feasible(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                 const LpParams& p, const LpOptions& opts = {});

struct EstimatorOptions {
    bool float_mode = false;
    double float_tol = 1e-9;
    // Use the weaker eps-hat scaling (eta * H(Delta^R) * eps) instead of the
    // proven 5 b^-2 eta H(Delta^R) eps.
    bool loose_eps_hat = false;
};

struct MarginalEstimatorStats {
    int iterations = 0;
    int lp_calls = 0;
    bool early_exit = false;
};

// Binary search over [b, 1/b] driven by LP feasibility; the returned estimate
// carries relative error (1 + eps_hat) when the leaf ratios satisfy the
// eps-error bound.
Rat marginal_estimator(const SpinModel& m, const CouplingTree& t, const RatioVector& ratios,
                       const Rat& eps, const Rat& b, const Rat& eta, int R, int Delta,
                       const EstimatorOptions& opts = {}, MarginalEstimatorStats* stats = nullptr);

Rat eps_hat_value(const Rat& eps, const Rat& b, const Rat& eta, int R, int Delta,
                  bool loose = false);

} // namespace spinsys
