#include "qg/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qg/io_util.hpp"

namespace qg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSpeedOfLight = 299792458.0;  // m/s
constexpr double kGhz = 1e9;

void check_dataset(const ResonanceDataset& dataset) {
  if (!(dataset.dielectric >= 1.0)) {
    throw std::invalid_argument("resonances: dielectric constant must be >= 1");
  }
  for (std::size_t i = 0; i < dataset.frequencies_ghz.size(); ++i) {
    if (!(dataset.frequencies_ghz[i] > 0.0)) {
      throw std::invalid_argument("resonances: frequencies must be positive");
    }
    if (i > 0 && !(dataset.frequencies_ghz[i] > dataset.frequencies_ghz[i - 1])) {
      throw std::invalid_argument("resonances: frequencies must be strictly increasing");
    }
  }
}

double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; hand-rolled so a seed means the same spectrum everywhere.
double next_gaussian(std::mt19937_64& rng) {
  double u1 = next_unit(rng);
  while (u1 <= 0.0) u1 = next_unit(rng);
  const double u2 = next_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

Spectrum load_resonances(const ResonanceDataset& dataset) {
  check_dataset(dataset);
  Spectrum sp;
  sp.provenance = Provenance::ingested;
  sp.values.reserve(dataset.frequencies_ghz.size());
  for (const double nu : dataset.frequencies_ghz) {
    sp.values.push_back(2.0 * kPi * nu * kGhz / kSpeedOfLight);
  }
  return sp;
}

ResonanceDataset dataset_from_spectrum(const Spectrum& spectrum, double dielectric,
                                       const std::string& label) {
  check_spectrum(spectrum);
  ResonanceDataset ds;
  ds.dielectric = dielectric;
  ds.label = label;
  ds.frequencies_ghz.reserve(spectrum.size());
  for (const double k : spectrum.values) {
    ds.frequencies_ghz.push_back(k * kSpeedOfLight / (2.0 * kPi * kGhz));
  }
  return ds;
}

std::vector<FluctuationPoint> counting_fluctuation(const Spectrum& spectrum) {
  check_spectrum(spectrum);
  const std::size_t n = spectrum.size();
  if (n < 20) {
    throw std::invalid_argument("counting_fluctuation: need at least 20 levels");
  }
  double sk = 0.0, sn = 0.0, skk = 0.0, skn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = spectrum.values[i];
    const double idx = static_cast<double>(i + 1);
    sk += k;
    sn += idx;
    skk += k * k;
    skn += k * idx;
  }
  const double count = static_cast<double>(n);
  const double denom = count * skk - sk * sk;
  if (!(denom > 0.0)) {
    throw std::invalid_argument("counting_fluctuation: degenerate spectrum");
  }
  const double a = (count * skn - sk * sn) / denom;
  const double b = (sn - a * sk) / count;

  std::vector<FluctuationPoint> series(n);
  for (std::size_t i = 0; i < n; ++i) {
    series[i].k = spectrum.values[i];
    series[i].n_fl = static_cast<double>(i + 1) - (a * spectrum.values[i] + b);
  }
  return series;
}

std::vector<double> flag_gaps(const std::vector<FluctuationPoint>& series) {
  constexpr std::size_t kWindow = 10;
  constexpr double kDrop = 0.5;
  const std::size_t n = series.size();
  std::vector<double> flags;
  if (n < 2 * kWindow) return flags;

  // drop(i) = mean of the window starting at i minus mean of the window
  // ending at i; a missing level leaves a step of about -1.
  std::vector<double> drop(n, 0.0);
  for (std::size_t i = kWindow; i + kWindow <= n; ++i) {
    double lead = 0.0, trail = 0.0;
    for (std::size_t j = i - kWindow; j < i; ++j) lead += series[j].n_fl;
    for (std::size_t j = i; j < i + kWindow; ++j) trail += series[j].n_fl;
    drop[i] = (trail - lead) / static_cast<double>(kWindow);
  }

  std::size_t i = 0;
  while (i < n) {
    if (drop[i] < -kDrop) {
      std::size_t j = i;
      std::size_t deepest = i;
      while (j < n && drop[j] < -kDrop) {
        if (drop[j] < drop[deepest]) deepest = j;
        ++j;
      }
      flags.push_back(series[deepest].k);
      i = j;
    } else {
      ++i;
    }
  }
  return flags;
}

Spectrum perturb(const Spectrum& spectrum, const PerturbPolicy& policy) {
  check_spectrum(spectrum);
  if (policy.drop_probability < 0.0 || policy.drop_probability >= 1.0) {
    throw std::invalid_argument("perturb: drop probability must lie in [0, 1)");
  }
  if (policy.jitter_relative_sigma < 0.0) {
    throw std::invalid_argument("perturb: jitter sigma must be >= 0");
  }
  std::mt19937_64 rng(policy.seed);
  Spectrum out;
  out.provenance = Provenance::perturbed;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    // Draw per level regardless of branch so the stream stays aligned.
    const double u = next_unit(rng);
    const double g = next_gaussian(rng);
    if (i + 1 >= policy.drop_min_index && u < policy.drop_probability) continue;
    const double k = spectrum.values[i] * (1.0 + policy.jitter_relative_sigma * g);
    if (!(k > 0.0)) {
      throw std::invalid_argument("perturb: jitter produced a non-positive level");
    }
    out.values.push_back(k);
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

std::string resonances_to_csv(const ResonanceDataset& dataset) {
  std::ostringstream out;
  out << "# unit=GHz, dielectric=" << format_g(dataset.dielectric)
      << ", label=" << dataset.label << "\n";
  for (std::size_t i = 0; i < dataset.frequencies_ghz.size(); ++i) {
    out << (i + 1) << "," << format_g(dataset.frequencies_ghz[i]) << "\n";
  }
  return out.str();
}

ResonanceDataset resonances_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("resonance file: empty file");
  }
  const std::string diel_tag = "dielectric=";
  const std::string label_tag = ", label=";
  const std::size_t diel_pos = line.find(diel_tag);
  const std::size_t label_pos = line.find(label_tag);
  if (line.empty() || line[0] != '#' || diel_pos == std::string::npos ||
      label_pos == std::string::npos || label_pos < diel_pos) {
    throw std::invalid_argument("resonance file: missing header line");
  }
  ResonanceDataset ds;
  ds.dielectric = std::strtod(line.c_str() + diel_pos + diel_tag.size(), nullptr);
  ds.label = line.substr(label_pos + label_tag.size());

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("resonance file: malformed row: " + line);
    }
    const char* start = line.c_str() + comma + 1;
    char* end = nullptr;
    const double nu = std::strtod(start, &end);
    if (end == start) {
      throw std::invalid_argument("resonance file: malformed value: " + line);
    }
    ds.frequencies_ghz.push_back(nu);
  }
  check_dataset(ds);
  return ds;
}

ResonanceDataset load_resonance_file(const std::string& path) {
  return resonances_from_csv(read_file(path));
}

void save_resonance_file(const ResonanceDataset& dataset, const std::string& path) {
  write_file_atomic(path, resonances_to_csv(dataset));
}

}  // namespace qg
