#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sva/model.hpp"
#include "sva/solve.hpp"

namespace sva {

// When a UV fails during a replication:
//  kAtStart  — one uniform draw per UV before departure; a failed UV collects
//              nothing. Reproduces the two-stage availability semantics
//              exactly (matches expected_objective on the matching scenario
//              set).
//  kPerLeg   — one uniform draw per UV realizes a failure point evaluated
//              before each POI visit in route order, with the per-leg hazard
//              calibrated so the whole-mission failure probability equals the
//              configured value; incentives of POIs visited strictly before
//              the failure count.
enum class FailureSemantics { kAtStart, kPerLeg };

struct SimConfig {
  std::vector<double> failure_probability;  // per UV, in [0, 1]
  long replications = 1000;
  uint64_t seed = 0;
  FailureSemantics semantics = FailureSemantics::kPerLeg;
  int jobs = 1;  // replication evaluation may run on several threads
};

struct SimReport {
  std::string plan_provenance;     // "stochastic", "deterministic", ...
  long replications = 0;
  double mean = 0.0;
  double stddev = 0.0;             // sample standard deviation
  std::vector<double> per_uv_mean; // per-UV incentive split
  std::vector<double> realized;    // one value per replication
};

// Deterministic given the seed (per-replication substreams derived with
// derive_seed, so results do not depend on `jobs`). Rejects infeasible plans
// (PlanInfeasibleError) before simulating.
SimReport simulate_mission(const Instance& inst, const Plan& plan,
                           const SimConfig& cfg);

struct VssConfig {
  SimConfig sim;
  SolveMode mode = SolveMode::kLshaped;  // stochastic model solve mode
  SolverOptions solver;
};

struct VssReport {
  Plan stochastic_plan;
  Plan deterministic_plan;
  double expected_stochastic = 0.0;
  double expected_deterministic = 0.0;
  double vss_abs = 0.0;  // expected_stochastic - expected_deterministic
  double vss_pct = 0.0;  // 100 * vss_abs / |expected_stochastic|
  SimReport sim_stochastic;
  SimReport sim_deterministic;
  SolveStats stochastic_stats;
  SolveStats deterministic_stats;
};

// Solves the stochastic model and its deterministic counterpart, evaluates
// both plans on the true scenario set and in simulation. When
// cfg.sim.failure_probability is empty, per-UV failure probabilities default
// to 1 - availability_scale(scen).
VssReport compute_vss(const Instance& inst, const ScenarioSet& scen,
                      const VssConfig& cfg = {});

}  // namespace sva
