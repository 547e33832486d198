#pragma once

#include <vector>

#include "sva/formulation.hpp"
#include "sva/mip.hpp"
#include "sva/model.hpp"
#include "sva/recourse.hpp"

namespace sva {

// Single aggregated optimality cut  a_y'y + a_x'x + theta <= 0. Valid for
// every feasible (x, y, theta) with theta below the true expected recourse;
// tight at the iterate whose duals produced it.
struct OptimalityCut {
  std::vector<double> y_coef;  // num_uvs*V*V, Plan layout
  std::vector<double> x_coef;
  // a_y'y + a_x'x at a first-stage point (equals -E[recourse] at the
  // generating iterate).
  double eval(const std::vector<uint8_t>& y, const std::vector<double>& x) const;
  double eval(const std::vector<double>& y, const std::vector<double>& x) const;
};

// Aggregates the scenario duals, weighting each scenario by its probability.
// Throws std::invalid_argument when the dual count differs from the
// scenario count.
OptimalityCut build_optimality_cut(const Instance& inst,
                                   const ScenarioSet& scen,
                                   const std::vector<RecourseDuals>& duals);

LpRow optimality_cut_row(const VariableIndex& vidx, const OptimalityCut& cut,
                         int theta_index = 0);

struct IterationLog {
  int iteration = 0;
  double lb = 0.0, ub = 0.0;
  int new_benders_cuts = 0;
  int new_sec_cuts = 0;
  double master_objective = 0.0;     // u^n
  double candidate_objective = 0.0;  // v^n
};

// (ub - lb) / max(|ub|, tol::kGapFloor); throws when lb exceeds ub beyond
// tolerance.
double relative_gap(double lb, double ub);

enum class LshapedStatus { kOptimal, kLimit };

struct LshapedOptions {
  double epsilon = 1e-4;
  bool multi_cut = false;  // one theta per scenario instead of the aggregate
  FormulationOptions formulation;
  MipLimits master_limits;
  long max_iterations = 200;
  double time_seconds = 3600.0;  // overall budget across master solves
};

struct LshapedResult {
  Plan plan;
  std::vector<IterationLog> log;
  SolveStats stats;  // aggregated over master solves
  double lb = 0.0, ub = 0.0;
  LshapedStatus status = LshapedStatus::kLimit;
};

// Decomposition driver: iteration 0 solves the first-stage-only master with
// lazy connectivity cuts; later masters run with a combined callback that
// separates connectivity cuts first and then checks the candidate's theta
// against its exact expected recourse, adding violated optimality cuts
// inside the tree. Bounds: ub from master objectives, lb from exact
// candidate evaluations; stops at ub - lb < epsilon*|ub|. No feasibility
// cuts exist (relatively complete recourse).
LshapedResult solve_lshaped(const Instance& inst, const ScenarioSet& scen,
                            const LshapedOptions& options = {});

}  // namespace sva
