#include "qg/spectrum.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "qg/io_util.hpp"

namespace qg {

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::solved: return "solved";
    case Provenance::ingested: return "ingested";
    case Provenance::perturbed: return "perturbed";
  }
  return "solved";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "solved") return Provenance::solved;
  if (name == "ingested") return Provenance::ingested;
  if (name == "perturbed") return Provenance::perturbed;
  throw std::invalid_argument("spectrum file: unknown provenance tag: " + name);
}

void check_spectrum(const Spectrum& spectrum) {
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
    if (!(spectrum.values[i] > 0.0)) {
      throw std::invalid_argument("spectrum: values must be positive");
    }
    if (i > 0 && spectrum.values[i] < spectrum.values[i - 1]) {
      throw std::invalid_argument("spectrum: values must be non-decreasing");
    }
  }
}

std::string spectrum_to_csv(const Spectrum& spectrum) {
  std::ostringstream out;
  out << "# unit=k_per_m, provenance=" << provenance_name(spectrum.provenance) << "\n";
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
    out << (i + 1) << "," << format_g(spectrum.values[i]) << "\n";
  }
  return out.str();
}

Spectrum spectrum_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("spectrum file: empty file");
  }
  const std::string tag = "provenance=";
  const std::size_t pos = line.find(tag);
  if (line.empty() || line[0] != '#' || pos == std::string::npos) {
    throw std::invalid_argument("spectrum file: missing header line");
  }
  if (line.find("unit=k_per_m") == std::string::npos) {
    throw std::invalid_argument("spectrum file: unit tag must be k_per_m");
  }
  Spectrum sp;
  sp.provenance = provenance_from_name(line.substr(pos + tag.size()));

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("spectrum file: malformed row: " + line);
    }
    const char* start = line.c_str() + comma + 1;
    char* end = nullptr;
    const double k = std::strtod(start, &end);
    if (end == start) {
      throw std::invalid_argument("spectrum file: malformed value: " + line);
    }
    sp.values.push_back(k);
  }
  check_spectrum(sp);
  return sp;
}

Spectrum load_spectrum(const std::string& path) {
  return spectrum_from_csv(read_file(path));
}

void save_spectrum(const Spectrum& spectrum, const std::string& path) {
  write_file_atomic(path, spectrum_to_csv(spectrum));
}

}  // namespace qg
