#pragma once

#include "sere/model.hpp"

namespace sere {

/// Wikipedia Normalized Distance:
///
///   (log10 max(A,B) - log10 both) / (log10 W - log10 min(A,B))
///
/// Returns +infinity when the terms never co-occur (both == 0). Throws
/// DomainError when either term has no hits or min(A,B) >= W.
double wnd_distance(const HitCounts& counts);

/// max(0, 1 - distance); 0 for an infinite distance.
double to_relatedness(double distance) noexcept;

RelatednessScore score(const HitCounts& counts);

}  // namespace sere
