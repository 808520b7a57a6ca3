#pragma once

#include <cstdint>
#include <vector>

#include "qg/metric_graph.hpp"
#include "qg/spectrum.hpp"

namespace qg {

enum class Formula {
  new_series,         // 2 + 8 pi^2 sum sin(x)/(x((2pi)^2-x^2)), x = k_n/t
  old_series,         // 2 + 2 sum cos(k_n/2t) sinc^2(k_n/4t)
  old_series_literal  // old series with the 2*pi leading coefficient
};

std::string formula_name(Formula f);
Formula formula_from_name(const std::string& name);

struct ChiSample {
  double t = 0.0;
  double x = 0.0;
};

struct ChiCurve {
  std::vector<ChiSample> samples;
  Formula formula = Formula::new_series;
  std::size_t terms = 0;  // spectrum entries used (K)
};

struct PlateauReport {
  int chi_estimate = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double max_deviation = 0.0;
  bool found = false;
};

struct TGrid {
  double t_lo = 0.5;
  double t_hi = 20.0;
  std::size_t steps = 60;
};

// Single term of the new series at x = k_n/t. Finite everywhere; the
// removable point x = 2pi evaluates to -1 through the rewrite
// -sinc(x - 2pi) * 8 pi^2 / (x (x + 2pi)), used for all x > pi.
double x_new_term(double x);

// Real part of sqrt(2pi) * Fourier transform of the underlying test
// function: -(sin x / x) * 4 pi^2 / (x^2 - (2pi)^2), stably evaluated.
// x_new_term(x) == 2 * phi_hat_real(x).
double phi_hat_real(double x);

// New estimator X_K(t) over the first `terms` levels (all levels in the
// two-argument form). Converges to chi for t >= t0.
double x_new(const Spectrum& spectrum, double t);
double x_new(const Spectrum& spectrum, double t, std::size_t terms);

// Original estimator with leading coefficient 2 (the interval oracle fixes
// the coefficient; `literal_coefficient` switches to the 2*pi variant for
// comparison output only).
double x_old(const Spectrum& spectrum, double t, std::size_t terms,
             bool literal_coefficient = false);

// Samples X_K at logarithmically spaced t.
ChiCurve chi_curve(const Spectrum& spectrum, std::size_t terms, const TGrid& grid,
                   Formula formula = Formula::new_series);

// Longest run of samples within 1/4 of one integer, accepted when it spans a
// ratio >= 1.3 with >= 10 samples. found=false signals too few resonances.
PlateauReport detect_plateau(const ChiCurve& curve);

enum class KMode { exact, approx, old };

// Levels required for |X(t0) - X_K(t0)| < epsilon.
std::int64_t k_required(int vertices, double lt0, double epsilon, KMode mode);

// Upper bound on |X(t0) - X_K(t0)| for the new series,
// (lt0/pi) log[q^2 / (q^2 - 4 lt0^2)] with q = K+1-|V|; requires q > 2 lt0.
double truncation_bound(std::int64_t terms, int vertices, double lt0);

// Default sampling windows: [0.5 t0, 8 t0] when the graph is known,
// [0.5, 20] 1/m otherwise; 60 log-spaced samples.
TGrid default_grid();
TGrid default_grid(const GraphSummary& summary);

std::string curve_to_csv(const ChiCurve& curve);
std::string plateau_to_text(const PlateauReport& report);
void save_curve(const ChiCurve& curve, const std::string& path);

}  // namespace qg
