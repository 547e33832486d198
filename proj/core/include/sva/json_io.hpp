#pragma once

#include <string>

#include "sva/lshaped.hpp"
#include "sva/model.hpp"
#include "sva/simulator.hpp"

namespace sva {

// Versioned JSON schemas (schema_version = 1) for the on-disk formats. The
// parsers are strict: unknown fields and version mismatches are rejected
// (std::invalid_argument) so typos in experiment scripts fail loudly.
// Doubles survive a round trip exactly (shortest-representation printing).
//
// Instance nodes keep the canonical order (stations first, base station
// first of all, then POIs); fuel_cost is the full V x V matrix in that
// order with a zero diagonal; distance_budget entries may be null for
// "unbounded".

inline constexpr int kSchemaVersion = 1;

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

std::string scenarios_to_json(const ScenarioSet& scen);
ScenarioSet scenarios_from_json(const std::string& text);

std::string plan_to_json(const Plan& plan);
Plan plan_from_json(const std::string& text);

std::string stats_to_json(const SolveStats& stats,
                          const std::vector<IterationLog>& log = {});

std::string sim_report_to_json(const SimReport& rep);
std::string vss_report_to_json(const VssReport& rep);

// Small file helpers shared by the CLI and the tests.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sva
