#pragma once

#include <string>

#include "sva/model.hpp"

namespace sva {

enum class ExportFormat { kDot, kSvg, kJson };

// Renders a feasible plan as a route map: one colored route per UV, the base
// station and refueling stations visually distinct, POI labels carrying the
// incentives. kDot emits one subgraph per UV; kSvg draws to scale; kJson
// lists the visit sequences. Throws PlanInfeasibleError on broken plans and
// std::invalid_argument on an unknown format name.
std::string export_routes(const Instance& inst, const Plan& plan,
                          ExportFormat format);

ExportFormat parse_export_format(const std::string& name);

}  // namespace sva
