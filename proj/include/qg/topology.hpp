#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qg/spectrum.hpp"

namespace qg {

// Planar means certified (beta <= 3 excludes both Kuratowski subgraphs);
// unknown means the spectrum cannot settle it either way.
enum class Planarity { planar, unknown };

struct TopologyReport {
  int chi = 0;
  int beta = 0;
  Planarity planarity = Planarity::unknown;
  bool complete = false;
  int complete_vertices = 0;  // n when complete
  std::optional<double> total_length_estimate;  // meters
  std::vector<std::string> notes;
};

// Structural verdicts from a recovered Euler characteristic (chi <= 1 for a
// connected graph). The complete-graph test checks (3 + sqrt(9 - 8 chi))/2
// for integrality in exact arithmetic.
TopologyReport infer(int chi);

// pi times the least-squares slope of n against k_n over the upper half of
// the spectrum; needs >= 20 levels.
double estimate_total_length(const Spectrum& spectrum);

std::string topology_to_text(const TopologyReport& report);

}  // namespace qg
