#include "sere/relatedness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sere/errors.hpp"

namespace sere {

double wnd_distance(const HitCounts& counts) {
  const auto lo = std::min(counts.a(), counts.b());
  const auto hi = std::max(counts.a(), counts.b());
  if (lo == 0) throw DomainError("term without full-text hits has no distance");
  if (lo >= counts.total()) {
    throw DomainError("min(A,B) must be smaller than the article total");
  }
  if (counts.both() == 0) return std::numeric_limits<double>::infinity();

  // log10(x) - log10(y) == log10(1 + (x - y) / y); the integer difference is
  // exact, so near-equal counts do not cancel. The 1/ln(10) factors cancel.
  const double numerator =
      std::log1p(static_cast<double>(hi - counts.both()) / static_cast<double>(counts.both()));
  const double denominator =
      std::log1p(static_cast<double>(counts.total() - lo) / static_cast<double>(lo));
  return numerator / denominator;
}

double to_relatedness(double distance) noexcept {
  if (std::isinf(distance) || std::isnan(distance)) return 0.0;
  return std::clamp(1.0 - distance, 0.0, 1.0);
}

RelatednessScore score(const HitCounts& counts) {
  RelatednessScore s;
  s.distance = wnd_distance(counts);
  s.relatedness = to_relatedness(s.distance);
  s.cooccurring = counts.both() > 0;
  return s;
}

}  // namespace sere
