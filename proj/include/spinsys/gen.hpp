// Small built-in test-instance generators.
#pragma once

#include <cstdint>

#include "spinsys/graph.hpp"

namespace spinsys {

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int n); // vertex 0 is the centre

// Seeded random connected graph: random attachment tree plus extra edges,
// all degrees <= max_degree.
Graph random_connected_graph(int n, int max_degree, int extra_edges, uint64_t seed);

} // namespace spinsys
