#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qg {

// Undirected edge carrying an optical length in meters.
struct Edge {
  int u = 0;
  int v = 0;
  double length = 0.0;
};

// Metric graph: vertices 0..vertex_count-1 plus length-weighted edges.
// Parallel edges are allowed, self-loops are not (the shortest periodic
// orbit must be 2*l_min). Immutable by convention after construction.
struct MetricGraph {
  int vertex_count = 0;
  std::vector<Edge> edges;
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Derived scalars. chi/beta are exact integer arithmetic; t0 = 1/(2*l_min)
// is the validity threshold of the spectral estimators and lt0 = L*t0 the
// dimensionless optical size.
struct GraphSummary {
  int chi = 0;
  int beta = 0;
  double total_length = 0.0;  // meters
  double l_min = 0.0;         // meters
  double t0 = 0.0;            // 1/meters
  double lt0 = 0.0;           // dimensionless
};

// Target shortest edge and total length for the generators.
struct LengthSpec {
  double l_min = 0.0;
  double total_length = 0.0;
};

// Violations are data, not failures: always returns a report.
ValidationReport validate(const MetricGraph& graph);

// Throws std::invalid_argument when the graph fails validate().
GraphSummary summarize(const MetricGraph& graph);

std::vector<int> vertex_degrees(const MetricGraph& graph);

// Complete simple graph on n >= 2 vertices. One edge has length exactly
// spec.l_min, the rest are >= l_min, and the lengths sum to
// spec.total_length. Deterministic per seed.
MetricGraph gen_complete(int n, LengthSpec spec, std::uint64_t seed);

// Connected simple graph with n vertices and m edges (random spanning tree
// plus random extra pairs), same length policy as gen_complete.
MetricGraph gen_random_connected(int n, int m, LengthSpec spec, std::uint64_t seed);

// Graph file format: JSON object {"vertices": int, "edges": [{"u","v","length"}]}.
std::string graph_to_json(const MetricGraph& graph);
MetricGraph graph_from_json(const std::string& text);
MetricGraph load_graph(const std::string& path);
void save_graph(const MetricGraph& graph, const std::string& path);

}  // namespace qg
