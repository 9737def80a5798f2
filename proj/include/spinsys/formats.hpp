// External text formats: edge-list graphs, JSON model specs, JSON records.
// Vertices and colours are 1-indexed in files, 0-indexed internally.
#pragma once

#include <string>

#include "spinsys/model.hpp"

namespace spinsys {

// Header "n m", then m lines "u v" (1-indexed). '#' comments and blank lines
// ignored. Duplicate edges and self-loops rejected.
Graph parse_graph_text(const std::string& text);
std::string serialize_graph(const Graph& g);

// {"kind": "coloring"|"list-coloring"|"hardcore"|"ising"|"general", ...}
// with rational entries as strings ("13/42"), integers, or decimals.
SpinModel parse_model_json(const std::string& text, const Graph& g);
std::string serialize_model(const SpinModel& m);

Graph load_graph_file(const std::string& path);
SpinModel load_model_file(const std::string& path, const Graph& g);

// "v:c,v:c" with 1-indexed vertices and colours.
Pinning parse_pinning(const std::string& text);
std::string format_pinning(const Pinning& pin);

} // namespace spinsys
