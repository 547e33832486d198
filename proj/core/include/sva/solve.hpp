#pragma once

#include <optional>

#include "sva/lshaped.hpp"

namespace sva {

enum class SolveMode { kDep, kDepRelaxed, kLshaped };

struct SolverOptions {
  double epsilon = 1e-4;  // decomposition termination gap
  FormulationOptions formulation;
  MipLimits limits;
  bool multi_cut = false;
  long max_iterations = 200;
};

struct SolveOutcome {
  bool has_plan = false;
  Plan plan;
  SolveStats stats;
  std::vector<IterationLog> log;  // decomposition mode only
};

// One entry point for the three computational modes: the deterministic
// equivalent with binary or relaxed second stage (branch and cut with lazy
// connectivity cuts) and the decomposition. Plan bounds carry the incumbent
// value and the proven bound.
SolveOutcome solve_instance(const Instance& inst, const ScenarioSet& scen,
                            SolveMode mode, const SolverOptions& options = {});

// First-stage-only model (the deterministic counterpart used in the value-
// of-stochastic-solution comparison).
SolveOutcome solve_deterministic(const Instance& inst,
                                 const SolverOptions& options = {});

}  // namespace sva
