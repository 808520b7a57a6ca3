#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qg {

enum class Provenance { solved, ingested, perturbed };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

// Ordered positive wavenumbers k_n (1/m), repeated per multiplicity. The
// zero eigenvalue is never stored; the estimators absorb it into their
// constant term.
struct Spectrum {
  std::vector<double> values;
  Provenance provenance = Provenance::solved;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

// Throws std::invalid_argument unless values are positive and non-decreasing.
void check_spectrum(const Spectrum& spectrum);

// Spectrum file: "# unit=k_per_m, provenance=<tag>" then "index,k" rows
// with 15 significant digits.
std::string spectrum_to_csv(const Spectrum& spectrum);
Spectrum spectrum_from_csv(const std::string& text);
Spectrum load_spectrum(const std::string& path);
void save_spectrum(const Spectrum& spectrum, const std::string& path);

}  // namespace qg
