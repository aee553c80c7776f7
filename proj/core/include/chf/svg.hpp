#pragma once

#include <string>
#include <vector>

#include "chf/domain.hpp"

namespace chf {

struct HeatmapCell {
  Point2 x;
  double value = 0.0;
};

/// Standalone SVG heatmap of a scalar field (log-scaled color) over the
/// domain, with the boundary drawn on top. `comment` is embedded verbatim
/// as an XML comment (provenance / config hash).
void write_heatmap_svg(const std::string& path, const Domain& domain,
                       const std::vector<HeatmapCell>& cells,
                       const std::string& title = "",
                       const std::string& comment = "");

struct ProfileSample {
  double s = 0.0;
  double value = 0.0;
  double envelope = 0.0;
};

/// Overlay of |P| and its theoretical envelope on a log-linear plot.
void write_profile_svg(const std::string& path,
                       const std::vector<ProfileSample>& samples,
                       const std::string& title = "",
                       const std::string& comment = "");

}  // namespace chf
