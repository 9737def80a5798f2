// Exact transportation problem (min-cost over all couplings), used for W1.
#pragma once

#include <vector>

#include "spinsys/rational.hpp"

namespace spinsys {

// Minimum of sum_ij cost[i][j] * f[i][j] over nonnegative f with row sums
// = supply and column sums = demand. Requires sum(supply) == sum(demand).
// Exact transportation simplex with Bland's rule.
Rat transport_min_cost(const std::vector<Rat>& supply, const std::vector<Rat>& demand,
                       const std::vector<std::vector<int>>& cost);

} // namespace spinsys
