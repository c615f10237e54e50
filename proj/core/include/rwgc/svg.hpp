#pragma once

#include <string>

#include "rwgc/rwg.hpp"

namespace rwgc {

// Best-effort static renderings of the three distribution plots. The CSV
// tables are the contract; these exist so results can be eyeballed without
// extra tooling.
std::string histogram_svg(const DistributionArtifacts& art, const std::string& title);
std::string performance_curve_svg(const DistributionArtifacts& art, const std::string& title);
std::string variance_cloud_svg(const DistributionArtifacts& art, const std::string& title);

}  // namespace rwgc
