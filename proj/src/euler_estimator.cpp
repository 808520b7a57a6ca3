#include "qg/euler_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qg/io_util.hpp"

namespace qg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

double sinc(double u) {
  return u == 0.0 ? 1.0 : std::sin(u) / u;
}

// Compensated accumulation; the series terms decay like 1/x^3, so ascending
// order keeps the small-index terms' digits.
class KahanSum {
 public:
  void add(double value) {
    const double y = value - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

void check_t(double t, const char* who) {
  if (!(t > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": t must be positive");
  }
}

void check_terms(const Spectrum& spectrum, std::size_t terms, const char* who) {
  if (terms > spectrum.size()) {
    throw std::invalid_argument(std::string(who) + ": K exceeds spectrum size");
  }
}

}  // namespace

std::string formula_name(Formula f) {
  switch (f) {
    case Formula::new_series: return "new";
    case Formula::old_series: return "old";
    case Formula::old_series_literal: return "old-literal";
  }
  return "new";
}

Formula formula_from_name(const std::string& name) {
  if (name == "new") return Formula::new_series;
  if (name == "old") return Formula::old_series;
  if (name == "old-literal") return Formula::old_series_literal;
  throw std::invalid_argument("formula: unknown name: " + name);
}

double x_new_term(double x) {
  x = std::abs(x);
  if (x <= kPi) {
    return sinc(x) * 8.0 * kPi * kPi / (kTwoPi * kTwoPi - x * x);
  }
  return -sinc(x - kTwoPi) * 8.0 * kPi * kPi / (x * (x + kTwoPi));
}

double phi_hat_real(double x) {
  x = std::abs(x);
  if (x <= kPi) {
    return sinc(x) * 4.0 * kPi * kPi / (kTwoPi * kTwoPi - x * x);
  }
  return -sinc(x - kTwoPi) * 4.0 * kPi * kPi / (x * (x + kTwoPi));
}

double x_new(const Spectrum& spectrum, double t) {
  if (spectrum.empty()) {
    throw std::invalid_argument("x_new: spectrum is empty");
  }
  return x_new(spectrum, t, spectrum.size());
}

double x_new(const Spectrum& spectrum, double t, std::size_t terms) {
  check_t(t, "x_new");
  check_terms(spectrum, terms, "x_new");
  KahanSum sum;
  for (std::size_t n = 0; n < terms; ++n) {
    sum.add(x_new_term(spectrum.values[n] / t));
  }
  return 2.0 + sum.value();
}

double x_old(const Spectrum& spectrum, double t, std::size_t terms, bool literal_coefficient) {
  check_t(t, "x_old");
  check_terms(spectrum, terms, "x_old");
  const double coefficient = literal_coefficient ? kTwoPi : 2.0;
  KahanSum sum;
  for (std::size_t n = 0; n < terms; ++n) {
    const double h = spectrum.values[n] / (4.0 * t);
    const double s = sinc(h);
    sum.add(std::cos(2.0 * h) * s * s);
  }
  return 2.0 + coefficient * sum.value();
}

ChiCurve chi_curve(const Spectrum& spectrum, std::size_t terms, const TGrid& grid, Formula formula) {
  if (terms < 1) {
    throw std::invalid_argument("chi_curve: K must be >= 1");
  }
  check_terms(spectrum, terms, "chi_curve");
  if (!(grid.t_lo > 0.0) || !(grid.t_hi > grid.t_lo) || grid.steps < 2) {
    throw std::invalid_argument("chi_curve: grid must satisfy 0 < t_lo < t_hi with >= 2 steps");
  }
  ChiCurve curve;
  curve.formula = formula;
  curve.terms = terms;
  const double ratio = grid.t_hi / grid.t_lo;
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(grid.steps - 1);
    const double t = grid.t_lo * std::pow(ratio, frac);
    const double x = formula == Formula::new_series
                         ? x_new(spectrum, t, terms)
                         : x_old(spectrum, t, terms, formula == Formula::old_series_literal);
    curve.samples.push_back({t, x});
  }
  return curve;
}

PlateauReport detect_plateau(const ChiCurve& curve) {
  if (curve.samples.size() < 20) {
    throw std::invalid_argument("detect_plateau: need at least 20 samples");
  }
  constexpr double kBand = 0.25;
  constexpr double kMinSpanRatio = 1.3;
  constexpr std::size_t kMinSamples = 10;

  double x_min = curve.samples.front().x;
  double x_max = x_min;
  for (const ChiSample& s : curve.samples) {
    x_min = std::min(x_min, s.x);
    x_max = std::max(x_max, s.x);
  }

  PlateauReport best;
  double best_ratio = 0.0;
  // chi <= 1 for a connected graph, so larger integers are never a valid
  // read-off. In particular every truncated curve rises to 2K+2 at large t,
  // which would otherwise register as a plateau.
  const int m_hi = std::min(1, static_cast<int>(std::ceil(x_max)));
  for (int m = static_cast<int>(std::floor(x_min)); m <= m_hi; ++m) {
    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t i = 0; i <= curve.samples.size(); ++i) {
      const bool inside =
          i < curve.samples.size() && std::abs(curve.samples[i].x - static_cast<double>(m)) < kBand;
      if (inside && !in_run) {
        run_start = i;
        in_run = true;
      }
      if (!inside && in_run) {
        in_run = false;
        const std::size_t len = i - run_start;
        const double t_lo = curve.samples[run_start].t;
        const double t_hi = curve.samples[i - 1].t;
        const double ratio = t_hi / t_lo;
        if (len >= kMinSamples && ratio >= kMinSpanRatio && ratio > best_ratio) {
          best_ratio = ratio;
          best.found = true;
          best.chi_estimate = m;
          best.t_lo = t_lo;
          best.t_hi = t_hi;
          best.max_deviation = 0.0;
          for (std::size_t j = run_start; j < i; ++j) {
            best.max_deviation =
                std::max(best.max_deviation, std::abs(curve.samples[j].x - static_cast<double>(m)));
          }
        }
      }
    }
  }
  return best;
}

std::int64_t k_required(int vertices, double lt0, double epsilon, KMode mode) {
  if (vertices < 1) {
    throw std::invalid_argument("k_required: vertices must be >= 1");
  }
  if (!(lt0 >= 0.5)) {
    throw std::invalid_argument("k_required: lt0 must be >= 1/2");
  }
  if (!(epsilon > 0.0) || !(epsilon < 0.5)) {
    throw std::invalid_argument("k_required: epsilon must lie in (0, 1/2)");
  }
  double value = static_cast<double>(vertices - 1);
  switch (mode) {
    case KMode::exact:
      value += 2.0 * lt0 / std::sqrt(1.0 - std::exp(-epsilon * kPi / lt0));
      break;
    case KMode::approx:
      value += 2.0 / std::sqrt(epsilon * kPi) * lt0 * std::sqrt(lt0);
      break;
    case KMode::old:
      value += 32.0 / (epsilon * kPi * kPi) * lt0 * lt0;
      break;
  }
  return static_cast<std::int64_t>(std::ceil(value));
}

double truncation_bound(std::int64_t terms, int vertices, double lt0) {
  const double q = static_cast<double>(terms + 1 - vertices);
  if (!(q > 2.0 * lt0)) {
    throw std::domain_error("truncation_bound: undefined, requires K + 1 - |V| > 2 * lt0");
  }
  return lt0 / kPi * std::log(q * q / (q * q - 4.0 * lt0 * lt0));
}

TGrid default_grid() { return TGrid{0.5, 20.0, 60}; }

TGrid default_grid(const GraphSummary& summary) {
  return TGrid{0.5 * summary.t0, 8.0 * summary.t0, 60};
}

std::string curve_to_csv(const ChiCurve& curve) {
  std::ostringstream out;
  out << "# formula=" << formula_name(curve.formula) << ", K=" << curve.terms << "\n";
  for (const ChiSample& s : curve.samples) {
    out << format_g(s.t) << "," << format_g(s.x) << "\n";
  }
  return out.str();
}

std::string plateau_to_text(const PlateauReport& report) {
  std::ostringstream out;
  out << "chi: " << report.chi_estimate << "\n"
      << "t_lo: " << format_g(report.t_lo) << "\n"
      << "t_hi: " << format_g(report.t_hi) << "\n"
      << "max_deviation: " << format_g(report.max_deviation) << "\n"
      << "found: " << (report.found ? "true" : "false") << "\n";
  return out.str();
}

void save_curve(const ChiCurve& curve, const std::string& path) {
  write_file_atomic(path, curve_to_csv(curve));
}

}  // namespace qg
