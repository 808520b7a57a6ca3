#include "qg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

void check_config(const SolverConfig& config) {
  if (!(config.refine_tolerance > 0.0)) {
    throw std::invalid_argument("solver: refine_tolerance must be positive");
  }
  if (!(config.scan_step_factor > 0.0) || config.scan_step_factor > 1.0) {
    throw std::invalid_argument("solver: scan_step_factor must be in (0, 1]");
  }
  if (config.max_refine_iterations < 1) {
    throw std::invalid_argument("solver: max_refine_iterations must be >= 1");
  }
}

struct BondSystem {
  Eigen::MatrixXd scattering;   // vertex scattering S, k-independent
  Eigen::VectorXd bond_length;  // l_b per directed bond
  double total_length = 0.0;
  double l_min = 0.0;
  double l_max = 0.0;
  int vertex_count = 0;
};

BondSystem make_bond_system(const MetricGraph& graph) {
  const ValidationReport report = validate(graph);
  if (!report.ok()) {
    throw std::invalid_argument("solver: invalid graph: " + report.issues.front());
  }
  const int m = static_cast<int>(graph.edges.size());
  const int bonds = 2 * m;
  const std::vector<int> deg = vertex_degrees(graph);

  BondSystem sys;
  sys.vertex_count = graph.vertex_count;
  sys.bond_length.resize(bonds);
  std::vector<int> start(static_cast<std::size_t>(bonds));
  std::vector<int> end(static_cast<std::size_t>(bonds));
  sys.l_min = graph.edges.front().length;
  sys.l_max = sys.l_min;
  for (int e = 0; e < m; ++e) {
    const Edge& edge = graph.edges[static_cast<std::size_t>(e)];
    start[static_cast<std::size_t>(2 * e)] = edge.u;
    end[static_cast<std::size_t>(2 * e)] = edge.v;
    start[static_cast<std::size_t>(2 * e + 1)] = edge.v;
    end[static_cast<std::size_t>(2 * e + 1)] = edge.u;
    sys.bond_length(2 * e) = edge.length;
    sys.bond_length(2 * e + 1) = edge.length;
    sys.total_length += edge.length;
    sys.l_min = std::min(sys.l_min, edge.length);
    sys.l_max = std::max(sys.l_max, edge.length);
  }

  sys.scattering = Eigen::MatrixXd::Zero(bonds, bonds);
  for (int b = 0; b < bonds; ++b) {
    const int v = end[static_cast<std::size_t>(b)];
    for (int bp = 0; bp < bonds; ++bp) {
      if (start[static_cast<std::size_t>(bp)] != v) continue;
      double s = 2.0 / static_cast<double>(deg[static_cast<std::size_t>(v)]);
      if (bp == (b ^ 1)) s -= 1.0;
      sys.scattering(bp, b) = s;
    }
  }
  return sys;
}

Eigen::MatrixXcd evolution(const BondSystem& sys, double k) {
  const Eigen::Index n = sys.scattering.rows();
  Eigen::MatrixXcd u(n, n);
  for (Eigen::Index row = 0; row < n; ++row) {
    const std::complex<double> phase = std::polar(1.0, k * sys.bond_length(row));
    u.row(row) = phase * sys.scattering.row(row).cast<std::complex<double>>();
  }
  return u;
}

struct PhaseSet {
  double sum = 0.0;              // sum of principal phases in [0, 2pi)
  double min_dist_to_one = 0.0;  // circle distance of the nearest phase to angle 0
};

PhaseSet principal_phases(const BondSystem& sys, double k) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(evolution(sys, k), false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("solver: eigendecomposition failed");
  }
  PhaseSet ps;
  ps.min_dist_to_one = kTwoPi;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double theta = std::arg(es.eigenvalues()(i));
    if (theta < 0.0) theta += kTwoPi;
    ps.sum += theta;
    ps.min_dist_to_one = std::min(ps.min_dist_to_one, std::min(theta, kTwoPi - theta));
  }
  return ps;
}

// Exact crossing counter: evaluates the accumulated winding of the 2|E|
// eigenphases past angle 0 between the sub-spectral floor and k.
class WindingCounter {
 public:
  explicit WindingCounter(BondSystem sys)
      : sys_(std::move(sys)),
        k_floor_(1e-6 * kPi / sys_.total_length),
        phi_ref_(principal_phases(sys_, k_floor_).sum) {}

  const BondSystem& system() const { return sys_; }
  double k_floor() const { return k_floor_; }

  std::optional<std::int64_t> try_count(double k, double phase_guard) const {
    const PhaseSet ps = principal_phases(sys_, k);
    if (ps.min_dist_to_one < phase_guard) {
      return std::nullopt;
    }
    const double raw = (phi_ref_ + 2.0 * sys_.total_length * (k - k_floor_) - ps.sum) / kTwoPi;
    const auto n = static_cast<std::int64_t>(std::llround(raw));
    if (std::abs(raw - static_cast<double>(n)) > 0.25 || n < 0) {
      throw std::runtime_error("solver: winding count lost integrality");
    }
    return n;
  }

 private:
  BondSystem sys_;
  double k_floor_;
  double phi_ref_;
};

// Bracket [lo, hi] containing `hi_count - lo_count` levels.
struct Cluster {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t lo_count = 0;
  std::int64_t hi_count = 0;
  std::int64_t multiplicity() const { return hi_count - lo_count; }
};

// Internal guard: an eigenphase this close to 0 cannot be placed on either
// side reliably, so the probe is nudged upward instead.
constexpr double kInternalPhaseGuard = 1e-12;

class ClusterSolver {
 public:
  ClusterSolver(const WindingCounter& counter, const SolverConfig& config)
      : counter_(counter), config_(config) {}

  std::pair<double, std::int64_t> counted(double k) const {
    double probe = k;
    const double step =
        std::max(4.0 * kInternalPhaseGuard / counter_.system().l_min,
                 16.0 * std::numeric_limits<double>::epsilon() * std::abs(k));
    for (int attempt = 0; attempt < 64; ++attempt) {
      if (const auto n = counter_.try_count(probe, kInternalPhaseGuard)) {
        return {probe, *n};
      }
      probe += step;
    }
    throw std::runtime_error("solver: unable to disambiguate counting probe");
  }

  double location_tolerance(double k) const {
    return config_.refine_tolerance * std::max(k, kPi / counter_.system().total_length);
  }

  // Splits (lo, hi] until every level group is isolated inside a bracket no
  // wider than the location tolerance.
  std::vector<Cluster> isolate(double lo, std::int64_t lo_count, double hi, std::int64_t hi_count) const {
    std::vector<Cluster> clusters;
    std::vector<Cluster> stack{{lo, hi, lo_count, hi_count}};
    long splits = 0;
    const long split_budget =
        static_cast<long>(config_.max_refine_iterations) * (hi_count - lo_count + 1) * 4 + 64;
    while (!stack.empty()) {
      Cluster c = stack.back();
      stack.pop_back();
      if (c.multiplicity() == 0) continue;
      if (c.hi - c.lo <= location_tolerance(c.hi)) {
        clusters.push_back(c);
        continue;
      }
      if (++splits > split_budget) {
        throw std::runtime_error("solver: refinement budget exhausted before isolating all levels");
      }
      const auto [mid, mid_count] = counted(0.5 * (c.lo + c.hi));
      if (mid <= c.lo || mid >= c.hi) {
        // Nudging escaped the bracket; it is already at tolerance scale.
        clusters.push_back(c);
        continue;
      }
      stack.push_back({c.lo, mid, c.lo_count, mid_count});
      stack.push_back({mid, c.hi, mid_count, c.hi_count});
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.lo < b.lo; });
    return clusters;
  }

  // One-sided Newton polish on the eigenphase nearest angle 0; the phase
  // speed is the length expectation of the corresponding eigenvector.
  double polish(const Cluster& c) const {
    double k = 0.5 * (c.lo + c.hi);
    const BondSystem& sys = counter_.system();
    for (int iter = 0; iter < 3; ++iter) {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(evolution(sys, k), true);
      if (es.info() != Eigen::Success) break;
      Eigen::Index best = 0;
      double best_abs = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double theta = std::arg(es.eigenvalues()(i));
        if (std::abs(theta) < best_abs) {
          best_abs = std::abs(theta);
          best = i;
        }
      }
      const Eigen::VectorXcd vec = es.eigenvectors().col(best);
      double speed = 0.0;  // d(theta)/dk = sum_b l_b |psi_b|^2
      for (Eigen::Index i = 0; i < vec.size(); ++i) {
        speed += sys.bond_length(i) * std::norm(vec(i));
      }
      if (!(speed > 0.5 * sys.l_min)) break;
      const double theta = std::arg(es.eigenvalues()(best));
      const double next = k - theta / speed;
      if (!(next > c.lo) || !(next < c.hi)) break;
      if (std::abs(next - k) <= 4.0 * std::numeric_limits<double>::epsilon() * k) {
        k = next;
        break;
      }
      k = next;
    }
    return k;
  }

 private:
  const WindingCounter& counter_;
  const SolverConfig& config_;
};

}  // namespace

Eigen::MatrixXcd bond_evolution(const MetricGraph& graph, double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("bond_evolution: k must be positive");
  }
  return evolution(make_bond_system(graph), k);
}

std::int64_t counting_function(const MetricGraph& graph, double k, const SolverConfig& config) {
  check_config(config);
  if (!(k > 0.0)) {
    throw std::invalid_argument("counting_function: k must be positive");
  }
  const WindingCounter counter(make_bond_system(graph));
  if (k <= counter.k_floor()) return 0;
  const double guard =
      std::max(counter.system().l_max * config.refine_tolerance * k, 1e-13);
  const auto n = counter.try_count(k, guard);
  if (!n) {
    throw std::runtime_error("counting_function: k is within tolerance of an eigenvalue (ambiguous count)");
  }
  return *n;
}

int kernel_dimension(const MetricGraph& graph, double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("kernel_dimension: k must be positive");
  }
  const BondSystem sys = make_bond_system(graph);
  const Eigen::MatrixXcd u = evolution(sys, k);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(id - u);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv(0), std::numeric_limits<double>::min());
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < 1e-8 * scale) ++dim;
  }
  return dim;
}

Spectrum solve(const MetricGraph& graph, std::size_t count, const SolverConfig& config) {
  check_config(config);
  if (count < 1) {
    throw std::invalid_argument("solve: count must be >= 1");
  }
  const WindingCounter counter(make_bond_system(graph));
  const BondSystem& sys = counter.system();
  const ClusterSolver cluster_solver(counter, config);
  const double mean_spacing = kPi / sys.total_length;

  // Upper end of the search range: Weyl guess, grown until it covers count.
  double k_top = mean_spacing * static_cast<double>(count + static_cast<std::size_t>(sys.vertex_count));
  if (config.k_max_hint > 0.0) k_top = std::max(k_top, config.k_max_hint);
  auto [top, top_count] = cluster_solver.counted(k_top);
  for (int grow = 0; top_count < static_cast<std::int64_t>(count); ++grow) {
    if (grow > config.max_refine_iterations) {
      throw std::runtime_error("solve: failed to bracket the requested number of levels");
    }
    std::tie(top, top_count) = cluster_solver.counted(top * 1.25);
  }

  // Bounded-step probe pass, then counting-guided bisection per occupied span.
  const double step = config.scan_step_factor * mean_spacing;
  std::vector<Cluster> clusters;
  double lo = counter.k_floor();
  std::int64_t lo_count = 0;
  while (lo < top) {
    double hi = std::min(lo + step, top);
    std::int64_t hi_count = top_count;
    if (hi < top) {
      std::tie(hi, hi_count) = cluster_solver.counted(hi);
      if (hi >= top) {
        hi = top;
        hi_count = top_count;
      }
    }
    if (hi_count > lo_count) {
      auto isolated = cluster_solver.isolate(lo, lo_count, hi, hi_count);
      clusters.insert(clusters.end(), isolated.begin(), isolated.end());
    }
    lo = hi;
    lo_count = hi_count;
  }

  Spectrum spectrum;
  spectrum.provenance = Provenance::solved;
  std::size_t straddle_index = clusters.size();
  std::int64_t cumulative = 0;
  for (std::size_t i = 0; i < clusters.size() && spectrum.size() < count; ++i) {
    const double k = cluster_solver.polish(clusters[i]);
    cumulative += clusters[i].multiplicity();
    for (std::int64_t copy = 0; copy < clusters[i].multiplicity() && spectrum.size() < count; ++copy) {
      spectrum.values.push_back(k);
    }
    straddle_index = i;
  }
  if (spectrum.size() < count) {
    throw std::runtime_error("solve: completeness certification failed (levels missing below top of range)");
  }

  // Certify with a shifted probe between the last occupied bracket and the
  // next known level; the count there must equal the cumulative multiplicity
  // through the last cluster (the requested count may split a degenerate
  // cluster, in which case the full cluster is certified).
  const Cluster& last = clusters[straddle_index];
  const double next_edge = (straddle_index + 1 < clusters.size()) ? clusters[straddle_index + 1].lo : top;
  if (next_edge > last.hi) {
    const double room = next_edge - last.hi;
    const double probe_at =
        last.hi + std::min(0.5 * room, 64.0 * cluster_solver.location_tolerance(last.hi));
    const auto [probe, probe_count] = cluster_solver.counted(probe_at);
    if (probe < next_edge && probe_count != cumulative) {
      throw std::runtime_error("solve: completeness certification failed above the returned range");
    }
  }
  return spectrum;
}

WeylReport verify_weyl(const Spectrum& spectrum, const MetricGraph& graph) {
  check_spectrum(spectrum);
  if (spectrum.empty()) {
    throw std::invalid_argument("verify_weyl: spectrum is empty");
  }
  const GraphSummary summary = summarize(graph);
  const std::size_t n = spectrum.size();

  std::vector<double> residual(n);
  WeylReport report;
  report.expected_offset = 0.5 * static_cast<double>(summary.beta);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s =
        spectrum.values[i] * summary.total_length / kPi - static_cast<double>(i + 1);
    residual[i] = s;
    sum += s;
    report.max_abs_residual = std::max(report.max_abs_residual, std::abs(s));
    // estk: k_n >= (pi/L)(n + 1 - |V|), with slack for refined-root rounding.
    if (s < static_cast<double>(1 - graph.vertex_count) - 1e-9) {
      ++report.estk_violations;
    }
  }
  report.estk_ok = report.estk_violations == 0;
  report.mean_offset = sum / static_cast<double>(n);

  // A single missing level shifts the signed residual by +1 from the gap
  // onward: scan window-mean jumps, and compare the global mean against the
  // beta/2 offset of an intact spectrum.
  const std::size_t window = 20;
  for (std::size_t c = 1; c < n; ++c) {
    const std::size_t wl = std::min(window, c);
    const std::size_t wr = std::min(window, n - c);
    if (wl < 5 || wr < 5) continue;
    double left = 0.0, right = 0.0;
    for (std::size_t i = c - wl; i < c; ++i) left += residual[i];
    for (std::size_t i = c; i < c + wr; ++i) right += residual[i];
    const double jump = right / static_cast<double>(wr) - left / static_cast<double>(wl);
    if (jump > report.max_window_jump) {
      report.max_window_jump = jump;
      report.jump_index = c;
    }
  }
  report.drift_flagged = report.max_window_jump > 0.6 ||
                         std::abs(report.mean_offset - report.expected_offset) > 0.5;
  return report;
}

}  // namespace qg
