#pragma once

#include <iosfwd>
#include <string>

#include "chf/domain.hpp"

namespace chf {

/// Parses a domain description:
///
///   domain:
///     loop:
///       orientation: outer
///       curve:
///         kind: arc
///         center: 0 0
///         radius: 1
///         theta0: 0
///         theta1: 6.283185307179586
///
/// Kinds: segment (p0, p1), arc (center, radius, theta0, theta1),
/// cubic (cx, cy: four coefficients each, constant term first),
/// polar (center, cos, optional sin/theta0/theta1). Angles in radians.
Domain parse_domain(std::istream& in, DomainOptions opts = {});
Domain load_domain_file(const std::string& path, DomainOptions opts = {});

}  // namespace chf
