#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qg/spectrum.hpp"

namespace qg {

// Measured resonance positions in GHz. The dielectric constant is carried as
// metadata only: graph lengths are optical lengths, so the nu -> k conversion
// needs no further scaling.
struct ResonanceDataset {
  std::vector<double> frequencies_ghz;
  double dielectric = 1.0;
  std::string label;
};

// Deterministic corruption model for robustness studies: each level with
// 1-based index >= drop_min_index is dropped with drop_probability, and the
// survivors get multiplicative Gaussian jitter.
struct PerturbPolicy {
  double drop_probability = 0.0;
  std::size_t drop_min_index = 1;
  double jitter_relative_sigma = 0.0;
  std::uint64_t seed = 0;
};

// k_n = 2 pi nu_n / c with nu in Hz; provenance = ingested.
Spectrum load_resonances(const ResonanceDataset& dataset);

// Inverse conversion, nu_GHz = k c / (2 pi 1e9).
ResonanceDataset dataset_from_spectrum(const Spectrum& spectrum, double dielectric = 1.0,
                                       const std::string& label = "");

struct FluctuationPoint {
  double k = 0.0;
  double n_fl = 0.0;
};

// Fluctuating part of the counting staircase: N(k_i) = i minus a least-squares
// Weyl line a k + b. The fitted slope a estimates L/pi.
std::vector<FluctuationPoint> counting_fluctuation(const Spectrum& spectrum);

// Candidate missing-level locations: k where the trailing 10-sample mean of
// N_fl sits more than 0.5 below the leading mean (one flag per drop region).
std::vector<double> flag_gaps(const std::vector<FluctuationPoint>& series);

Spectrum perturb(const Spectrum& spectrum, const PerturbPolicy& policy);

// Resonance file: "# unit=GHz, dielectric=<real>, label=<text>" then
// "index,nu_ghz" rows.
std::string resonances_to_csv(const ResonanceDataset& dataset);
ResonanceDataset resonances_from_csv(const std::string& text);
ResonanceDataset load_resonance_file(const std::string& path);
void save_resonance_file(const ResonanceDataset& dataset, const std::string& path);

}  // namespace qg
