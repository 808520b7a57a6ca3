#include "qg/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "qg/io_util.hpp"

namespace qg {

namespace {

// Canonical uniform in [0,1); keeps generated graphs identical across
// standard-library implementations.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

// One edge gets exactly spec.l_min; the remaining budget is spread over the
// others proportionally to fresh uniforms, so the sum lands on
// spec.total_length up to rounding.
std::vector<double> draw_lengths(std::size_t m, const LengthSpec& spec, std::mt19937_64& rng) {
  if (!(spec.l_min > 0.0) || !(spec.total_length > 0.0)) {
    throw std::invalid_argument("graph generator: length spec must be positive");
  }
  const double floor_total = static_cast<double>(m) * spec.l_min;
  if (floor_total > spec.total_length * (1.0 + 1e-12)) {
    throw std::invalid_argument("graph generator: infeasible length spec (m*l_min exceeds total length)");
  }
  if (m == 1) {
    if (std::abs(spec.total_length - spec.l_min) > 1e-9 * spec.total_length) {
      throw std::invalid_argument("graph generator: single edge requires l_min == total_length");
    }
    return {spec.total_length};
  }

  std::vector<double> u(m - 1);
  double usum = 0.0;
  for (double& x : u) {
    x = next_unit(rng) + 1e-9;
    usum += x;
  }
  const std::size_t min_edge = static_cast<std::size_t>(next_below(rng, m));
  const double budget = spec.total_length - floor_total;

  std::vector<double> lengths(m, spec.l_min);
  std::size_t j = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == min_edge) continue;
    lengths[i] += budget * u[j++] / usum;
  }
  return lengths;
}

}  // namespace

ValidationReport validate(const MetricGraph& graph) {
  ValidationReport report;
  if (graph.vertex_count <= 0) {
    report.issues.push_back("vertex count must be positive");
    return report;
  }
  bool indices_ok = true;
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const Edge& e = graph.edges[i];
    if (e.u < 0 || e.u >= graph.vertex_count || e.v < 0 || e.v >= graph.vertex_count) {
      report.issues.push_back("edge " + std::to_string(i) + ": bad vertex index");
      indices_ok = false;
      continue;
    }
    if (e.u == e.v) {
      report.issues.push_back("edge " + std::to_string(i) + ": self-loop");
    }
    if (!(e.length > 0.0)) {
      report.issues.push_back("edge " + std::to_string(i) + ": non-positive length");
    }
  }

  // Connectivity over the structurally sound edges.
  if (indices_ok) {
    std::vector<int> parent(graph.vertex_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
      }
      return x;
    };
    for (const Edge& e : graph.edges) {
      parent[find(e.u)] = find(e.v);
    }
    for (int v = 1; v < graph.vertex_count; ++v) {
      if (find(v) != find(0)) {
        report.issues.push_back("graph is disconnected");
        break;
      }
    }
  }
  return report;
}

GraphSummary summarize(const MetricGraph& graph) {
  const ValidationReport report = validate(graph);
  if (!report.ok()) {
    throw std::invalid_argument("summarize: invalid graph: " + report.issues.front());
  }
  GraphSummary s;
  s.chi = graph.vertex_count - static_cast<int>(graph.edges.size());
  s.beta = 1 - s.chi;
  double total = 0.0;
  double lmin = graph.edges.front().length;
  for (const Edge& e : graph.edges) {
    total += e.length;
    lmin = std::min(lmin, e.length);
  }
  s.total_length = total;
  s.l_min = lmin;
  s.t0 = 1.0 / (2.0 * lmin);
  s.lt0 = total * s.t0;
  return s;
}

std::vector<int> vertex_degrees(const MetricGraph& graph) {
  std::vector<int> deg(static_cast<std::size_t>(std::max(graph.vertex_count, 0)), 0);
  for (const Edge& e : graph.edges) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

MetricGraph gen_complete(int n, LengthSpec spec, std::uint64_t seed) {
  if (n < 2) {
    throw std::invalid_argument("gen_complete: need n >= 2");
  }
  MetricGraph g;
  g.vertex_count = n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      g.edges.push_back({u, v, 0.0});
    }
  }
  std::mt19937_64 rng(seed);
  const std::vector<double> lengths = draw_lengths(g.edges.size(), spec, rng);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    g.edges[i].length = lengths[i];
  }
  return g;
}

MetricGraph gen_random_connected(int n, int m, LengthSpec spec, std::uint64_t seed) {
  if (n < 2) {
    throw std::invalid_argument("gen_random_connected: need n >= 2");
  }
  const long max_edges = static_cast<long>(n) * (n - 1) / 2;
  if (m < n - 1 || m > max_edges) {
    throw std::invalid_argument("gen_random_connected: edge count must satisfy n-1 <= m <= n(n-1)/2");
  }
  std::mt19937_64 rng(seed);

  // Random spanning tree by attaching each vertex to a random earlier one.
  std::vector<std::pair<int, int>> chosen;
  for (int v = 1; v < n; ++v) {
    const int p = static_cast<int>(next_below(rng, static_cast<std::uint64_t>(v)));
    chosen.emplace_back(std::min(p, v), std::max(p, v));
  }

  std::vector<std::pair<int, int>> rest;
  {
    std::vector<std::vector<bool>> used(static_cast<std::size_t>(n),
                                        std::vector<bool>(static_cast<std::size_t>(n), false));
    for (const auto& [u, v] : chosen) used[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (!used[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) rest.emplace_back(u, v);
      }
    }
  }
  // Partial Fisher-Yates for the extra edges.
  const std::size_t extra = static_cast<std::size_t>(m - (n - 1));
  for (std::size_t i = 0; i < extra; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(next_below(rng, rest.size() - i));
    std::swap(rest[i], rest[j]);
    chosen.push_back(rest[i]);
  }
  std::sort(chosen.begin(), chosen.end());

  MetricGraph g;
  g.vertex_count = n;
  const std::vector<double> lengths = draw_lengths(chosen.size(), spec, rng);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    g.edges.push_back({chosen[i].first, chosen[i].second, lengths[i]});
  }
  return g;
}

std::string graph_to_json(const MetricGraph& graph) {
  nlohmann::ordered_json j;
  j["vertices"] = graph.vertex_count;
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : graph.edges) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

MetricGraph graph_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MetricGraph g;
    g.vertex_count = j.at("vertices").get<int>();
    for (const auto& e : j.at("edges")) {
      g.edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(), e.at("length").get<double>()});
    }
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("graph file: malformed JSON: ") + ex.what());
  }
}

MetricGraph load_graph(const std::string& path) {
  return graph_from_json(read_file(path));
}

void save_graph(const MetricGraph& graph, const std::string& path) {
  write_file_atomic(path, graph_to_json(graph));
}

}  // namespace qg
