#include "qg/topology.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "qg/io_util.hpp"

namespace qg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

TopologyReport infer(int chi) {
  if (chi > 1) {
    throw std::invalid_argument("infer: chi > 1 is inconsistent with a connected graph");
  }
  TopologyReport report;
  report.chi = chi;
  report.beta = 1 - chi;
  report.planarity = report.beta <= 3 ? Planarity::planar : Planarity::unknown;
  if (report.planarity == Planarity::unknown) {
    report.notes.push_back(
        "beta >= 4 is compatible with both planar and non-planar graphs; planarity undecided");
  }

  // n = (3 + sqrt(9 - 8 chi)) / 2 must be a positive integer: 9 - 8 chi a
  // perfect square with 3 + root even.
  const std::int64_t disc = 9 - 8 * static_cast<std::int64_t>(chi);
  std::int64_t root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(disc))));
  while (root * root > disc) --root;
  while ((root + 1) * (root + 1) <= disc) ++root;
  if (root * root == disc && (3 + root) % 2 == 0) {
    report.complete = true;
    report.complete_vertices = static_cast<int>((3 + root) / 2);
    report.notes.push_back(
        "complete-graph verdict is a chi collision test: a non-complete graph may share this chi");
  }
  return report;
}

double estimate_total_length(const Spectrum& spectrum) {
  check_spectrum(spectrum);
  const std::size_t n = spectrum.size();
  if (n < 20) {
    throw std::invalid_argument("estimate_total_length: need at least 20 levels");
  }
  // Fit n = a k + b over the upper half; the O(1) Weyl offset biases the
  // slope like 1/n, so the high levels carry the estimate.
  const std::size_t lo = n / 2;
  double sk = 0.0, sn = 0.0, skk = 0.0, skn = 0.0;
  const double count = static_cast<double>(n - lo);
  for (std::size_t i = lo; i < n; ++i) {
    const double k = spectrum.values[i];
    const double idx = static_cast<double>(i + 1);
    sk += k;
    sn += idx;
    skk += k * k;
    skn += k * idx;
  }
  const double denom = count * skk - sk * sk;
  if (!(denom > 0.0)) {
    throw std::invalid_argument("estimate_total_length: degenerate spectrum (no spread in k)");
  }
  const double slope = (count * skn - sk * sn) / denom;
  return kPi * slope;
}

std::string topology_to_text(const TopologyReport& report) {
  std::ostringstream out;
  out << "chi: " << report.chi << "\n"
      << "beta: " << report.beta << "\n"
      << "planarity: " << (report.planarity == Planarity::planar ? "planar" : "unknown") << "\n";
  if (report.complete) {
    out << "completeness: complete_with_vertices " << report.complete_vertices << "\n";
  } else {
    out << "completeness: not_complete\n";
  }
  if (report.total_length_estimate) {
    out << "total_length_estimate_m: " << format_g(*report.total_length_estimate) << "\n";
  }
  for (const std::string& note : report.notes) {
    out << "note: " << note << "\n";
  }
  return out.str();
}

}  // namespace qg
