#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "qg/euler_estimator.hpp"
#include "qg/metric_graph.hpp"
#include "qg/resonance.hpp"
#include "qg/solver.hpp"
#include "qg/topology.hpp"

using namespace qg;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

TEST_CASE("k_required levels suffice to read chi off random connected graphs") {
  // 20 random graphs with 4..6 vertices, solved with exactly the derived
  // number of levels at epsilon = 1/4: the plateau must give the true chi.
  int done = 0;
  for (std::uint64_t seed = 100; done < 20; ++seed) {
    const int n = 4 + static_cast<int>(seed % 3);
    const int max_edges = n * (n - 1) / 2;
    const int m = std::min(n - 1 + static_cast<int>(seed % 4), max_edges);
    const MetricGraph graph = gen_random_connected(n, m, {0.2, 0.25 * m}, seed);
    const GraphSummary summary = summarize(graph);

    const auto needed = k_required(n, summary.lt0, 0.25, KMode::exact);
    const Spectrum sp = solve(graph, static_cast<std::size_t>(needed));
    const PlateauReport plateau =
        detect_plateau(chi_curve(sp, sp.size(), default_grid(summary)));

    CAPTURE(seed);
    CAPTURE(n);
    CAPTURE(m);
    REQUIRE(plateau.found);
    CHECK(plateau.chi_estimate == summary.chi);
    ++done;
  }
}

TEST_CASE("K5 counting density matches the 132-levels-to-5.12-GHz anchor") {
  const MetricGraph k5 = gen_complete(5, {0.202, 3.949}, 7);
  const double k = 2.0 * kPi * 5.12 / 0.299792458;
  const auto count = counting_function(k5, k);
  CHECK(count >= 129);
  CHECK(count <= 135);
}

TEST_CASE("K4 full synthetic spectrum has small counting fluctuations") {
  const MetricGraph k4 = gen_complete(4, {0.155, 1.494}, 7);
  const Spectrum sp = solve(k4, 106);
  for (const auto& point : counting_fluctuation(sp)) {
    CHECK(std::abs(point.n_fl) < 3.0);
  }
}

TEST_CASE("small multiplicative jitter does not move the plateau") {
  const MetricGraph k4 = gen_complete(4, {0.155, 1.494}, 7);
  const GraphSummary summary = summarize(k4);
  const Spectrum sp = solve(k4, 60);

  PerturbPolicy policy;
  policy.jitter_relative_sigma = 1e-4;
  policy.seed = 31;
  const Spectrum jittered = perturb(sp, policy);
  REQUIRE(jittered.size() == sp.size());

  const PlateauReport plateau =
      detect_plateau(chi_curve(jittered, jittered.size(), default_grid(summary)));
  REQUIRE(plateau.found);
  CHECK(plateau.chi_estimate == -2);
}

TEST_CASE("the old series at K=28 misses chi where the new one reads it") {
  const MetricGraph k4 = gen_complete(4, {0.155, 1.494}, 7);
  const Spectrum sp = solve(k4, 106);
  double old_closest = 1e9;
  double new_worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 3.0 * std::pow(2.0, static_cast<double>(i) / 99.0);
    old_closest = std::min(old_closest, std::abs(x_old(sp, t, 28) + 2.0));
    new_worst = std::max(new_worst, std::abs(x_new(sp, t, 28) + 2.0));
  }
  CHECK(old_closest > 0.25);  // never enters the plateau band on [3, 6]
  CHECK(new_worst < 0.25);
}

TEST_CASE("deliberate under-truncation reports no plateau") {
  const MetricGraph k4 = gen_complete(4, {0.155, 1.494}, 7);
  const GraphSummary summary = summarize(k4);
  const Spectrum sp = solve(k4, 40);
  const PlateauReport plateau = detect_plateau(chi_curve(sp, 5, default_grid(summary)));
  CHECK_FALSE(plateau.found);
}

TEST_CASE("the 2K+2 asymptote at large t is not mistaken for a plateau") {
  // With very few terms the curve flattens toward 2K+2 inside any wide grid;
  // that level is above chi <= 1 and must not be reported.
  const MetricGraph k5 = gen_complete(5, {0.202, 3.949}, 7);
  const Spectrum sp = solve(k5, 20);
  const PlateauReport plateau = detect_plateau(chi_curve(sp, 4, default_grid()));
  CHECK_FALSE(plateau.found);
}

TEST_CASE("solved K4 spectrum ingests back through the GHz representation") {
  const MetricGraph k4 = gen_complete(4, {0.155, 1.494}, 7);
  const Spectrum sp = solve(k4, 30);
  const Spectrum back = load_resonances(dataset_from_spectrum(sp, 2.06, "loopback"));
  REQUIRE(back.size() == sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    CHECK(std::abs(back.values[i] - sp.values[i]) < 1e-9 * sp.values[i]);
  }
}
