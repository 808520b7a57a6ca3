#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qg/euler_estimator.hpp"
#include "qg/spectrum.hpp"

using namespace qg;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Spectrum interval_spectrum(std::size_t levels, double length = 1.0) {
  Spectrum sp;
  for (std::size_t n = 1; n <= levels; ++n) {
    sp.values.push_back(static_cast<double>(n) * kPi / length);
  }
  return sp;
}

}  // namespace

// Interval oracle: k_n = n pi, t = 1/2. The n=1 term is the removable point
// contributing exactly -1 and every other term vanishes, so X = 1 = chi for
// any K >= 1.
TEST_CASE("x_new is exact on the interval spectrum") {
  const Spectrum sp = interval_spectrum(200);
  CHECK(x_new(sp, 0.5, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x_new(sp, 0.5, 37) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x_new(sp, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("x_new with an empty term range returns the bare constant") {
  const Spectrum sp = interval_spectrum(5);
  CHECK(x_new(sp, 0.5, 0) == 2.0);
}

TEST_CASE("x_new rejects bad parameters") {
  const Spectrum sp = interval_spectrum(5);
  CHECK_THROWS_AS((void)x_new(sp, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)x_new(sp, -1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)x_new(sp, 0.5, 6), std::invalid_argument);
  CHECK_THROWS_AS((void)x_new(Spectrum{}, 0.5), std::invalid_argument);
}

// Odd-reciprocal-square oracle: sum over odd n of 1/n^2 = pi^2/8, so the full
// old series at t = t0 = 1/2 equals 1 = chi exactly with coefficient 2.
TEST_CASE("x_old coefficient is fixed by the interval oracle") {
  const Spectrum sp = interval_spectrum(5000);
  CHECK(x_old(sp, 0.5, 5000) == doctest::Approx(1.0).epsilon(2e-4));

  // K = 50 truncation: analytic tail below 0.02.
  const double x50 = x_old(sp, 0.5, 50);
  CHECK(std::abs(x50 - 1.0) < 0.02);
  CHECK(x50 == doctest::Approx(1.0081046145365558).epsilon(1e-12));

  // The literal 2*pi coefficient misses chi; kept for comparison output.
  const double literal = x_old(sp, 0.5, 5000, true);
  CHECK(std::abs(literal - 1.0) > 1.0);
  CHECK(literal == doctest::Approx(2.0 - kPi).epsilon(1e-3));
}

TEST_CASE("phi_hat_real closed form") {
  CHECK(phi_hat_real(0.0) == 1.0);
  CHECK(phi_hat_real(1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(phi_hat_real(2.0 * kPi) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(phi_hat_real(kPi) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("x_new term equals twice phi_hat_real everywhere") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double x = std::exp(std::log(1e-3) + u * (std::log(1e6) - std::log(1e-3)));
    const double term = x_new_term(x);
    const double twice = 2.0 * phi_hat_real(x);
    CHECK(term == doctest::Approx(twice).epsilon(1e-12));
  }
}

TEST_CASE("x_new term is finite and continuous through the removable point") {
  // No blowup anywhere in (0, 1e6].
  for (double x : {1e-9, 1e-3, 0.5, kPi, 2.0 * kPi, 10.0, 1e3, 1e6}) {
    CHECK(std::isfinite(x_new_term(x)));
  }
  CHECK(x_new_term(2.0 * kPi) == doctest::Approx(-1.0).epsilon(1e-12));

  // Continuity across [2pi - 1e-3, 2pi + 1e-3]: successive differences stay
  // proportional to the step.
  double prev = x_new_term(2.0 * kPi - 1e-3);
  for (int i = 1; i <= 200; ++i) {
    const double x = 2.0 * kPi - 1e-3 + i * 1e-5;
    const double cur = x_new_term(x);
    CHECK(std::isfinite(cur));
    CHECK(std::abs(cur - prev) < 1e-4);
    prev = cur;
  }

  // The stable rewrite agrees with the naive form where the latter is sound.
  for (double x : {2.0 * kPi - 1e-2, 2.0 * kPi + 1e-2}) {
    const double naive = 8.0 * kPi * kPi * std::sin(x) / (x * (4.0 * kPi * kPi - x * x));
    CHECK(x_new_term(x) == doctest::Approx(naive).epsilon(1e-9));
  }
}

TEST_CASE("X depends only on k_n / t (scale invariance)") {
  std::mt19937_64 rng(7);
  Spectrum sp;
  double k = 0.0;
  for (int i = 0; i < 60; ++i) {
    k += 0.3 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    sp.values.push_back(k);
  }
  const double scale = 3.7;
  Spectrum scaled = sp;
  for (double& v : scaled.values) v *= scale;
  for (double t : {0.8, 2.0, 5.0}) {
    CHECK(x_new(sp, t, 60) == doctest::Approx(x_new(scaled, t * scale, 60)).epsilon(1e-12));
    CHECK(x_old(sp, t, 60) == doctest::Approx(x_old(scaled, t * scale, 60)).epsilon(1e-12));
  }
}

TEST_CASE("chi_curve samples log-spaced t with the requested truncation") {
  const Spectrum sp = interval_spectrum(40);
  const ChiCurve curve = chi_curve(sp, 10, {0.5, 8.0, 33});
  REQUIRE(curve.samples.size() == 33);
  CHECK(curve.terms == 10);
  CHECK(curve.samples.front().t == doctest::Approx(0.5));
  CHECK(curve.samples.back().t == doctest::Approx(8.0));
  const double r0 = curve.samples[1].t / curve.samples[0].t;
  const double r1 = curve.samples[20].t / curve.samples[19].t;
  CHECK(r0 == doctest::Approx(r1).epsilon(1e-9));
  CHECK(curve.samples.front().x == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)chi_curve(sp, 0, {0.5, 8.0, 33}), std::invalid_argument);
  CHECK_THROWS_AS((void)chi_curve(sp, 41, {0.5, 8.0, 33}), std::invalid_argument);
  CHECK_THROWS_AS((void)chi_curve(sp, 10, {0.0, 8.0, 33}), std::invalid_argument);
}

TEST_CASE("detect_plateau reads a constant curve in full") {
  ChiCurve curve;
  curve.terms = 1;
  for (std::size_t i = 0; i < 60; ++i) {
    const double t = 0.5 * std::pow(40.0, static_cast<double>(i) / 59.0);
    curve.samples.push_back({t, 1.0});
  }
  const PlateauReport report = detect_plateau(curve);
  REQUIRE(report.found);
  CHECK(report.chi_estimate == 1);
  CHECK(report.t_lo == doctest::Approx(0.5));
  CHECK(report.t_hi == doctest::Approx(20.0));
  CHECK(report.max_deviation == 0.0);
}

TEST_CASE("detect_plateau reports insufficiency instead of throwing") {
  ChiCurve curve;
  curve.terms = 1;
  for (std::size_t i = 0; i < 40; ++i) {
    const double t = 0.5 + 0.25 * static_cast<double>(i);
    curve.samples.push_back({t, 0.37 * static_cast<double>(i)});  // sweeps past integers quickly
  }
  CHECK_FALSE(detect_plateau(curve).found);

  ChiCurve tiny;
  tiny.samples.resize(19);
  CHECK_THROWS_AS((void)detect_plateau(tiny), std::invalid_argument);
}

TEST_CASE("k_required reproduces the published counts") {
  CHECK(k_required(4, 4.82, 0.25, KMode::exact) == 28);
  CHECK(k_required(5, 9.74, 0.25, KMode::exact) == 74);
  const auto old_count = k_required(5, 9.77, 0.25, KMode::old);
  CHECK(old_count >= 1241);
  CHECK(old_count <= 1245);
}

TEST_CASE("k_required monotonicity and the approx regime") {
  for (double lt0 : {0.6, 2.0, 5.0, 9.74, 12.0}) {
    std::int64_t prev = k_required(5, lt0, 0.05, KMode::exact);
    for (double eps : {0.1, 0.2, 0.3, 0.45}) {
      const std::int64_t cur = k_required(5, lt0, eps, KMode::exact);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
  std::int64_t prev = 0;
  for (double lt0 : {0.6, 2.0, 5.0, 9.74, 12.0}) {
    const std::int64_t cur = k_required(5, lt0, 0.25, KMode::exact);
    CHECK(cur >= prev);
    prev = cur;
  }
  // At the default epsilon = 1/4 the large-lt0 approximation trails the
  // exact count by at most one over the working lt0 range.
  for (double lt0 : {5.0, 7.0, 9.74, 11.0}) {
    CHECK(k_required(6, lt0, 0.25, KMode::approx) >= k_required(6, lt0, 0.25, KMode::exact) - 1);
  }
  CHECK_THROWS_AS((void)k_required(4, 0.4, 0.25, KMode::exact), std::invalid_argument);
  CHECK_THROWS_AS((void)k_required(4, 5.0, 0.0, KMode::exact), std::invalid_argument);
  CHECK_THROWS_AS((void)k_required(4, 5.0, 0.5, KMode::exact), std::invalid_argument);
}

TEST_CASE("truncation_bound closed form and domain") {
  CHECK(truncation_bound(28, 4, 4.82) == doctest::Approx(0.24697776773463326).epsilon(1e-10));
  CHECK(truncation_bound(74, 5, 9.74) <= 0.25);
  CHECK(truncation_bound(74, 5, 9.74) == doctest::Approx(0.249906023318875).epsilon(1e-10));
  // 12 + 1 - 4 = 9 < 2 * 4.82
  CHECK_THROWS_AS((void)truncation_bound(12, 4, 4.82), std::domain_error);
}

TEST_CASE("curve csv carries formula and truncation in the header") {
  const Spectrum sp = interval_spectrum(30);
  const ChiCurve curve = chi_curve(sp, 12, {0.5, 4.0, 25}, Formula::old_series);
  const std::string csv = curve_to_csv(curve);
  CHECK(csv.rfind("# formula=old, K=12\n", 0) == 0);
}
