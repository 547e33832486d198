#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sva/lp.hpp"

namespace sva {

// A linear program plus an integrality mask. Masked columns must have finite
// bounds.
struct MipProblem {
  LinearProgram lp;
  std::vector<uint8_t> integral;
  void validate() const;
};

enum class CutKind { kSubTour, kBendersOptimality, kUser };

struct Cut {
  LpRow row;
  CutKind kind = CutKind::kUser;
  std::string name;
};

// Lazy-cut contract: called on integral candidate solutions; every returned
// cut must be violated by the candidate (violation > tol::kCutViolation) and
// valid for all integer-feasible solutions of the true model. Integral
// candidates are accepted as incumbents only once the callback returns
// nothing.
using CutCallback = std::function<std::vector<Cut>(const std::vector<double>&)>;

enum class MipStatus { kOptimal, kInfeasible, kUnbounded, kLimit };

struct SolveStats {
  long nodes = 0;
  long subtour_cuts = 0;
  long benders_cuts = 0;
  long user_cuts = 0;
  double wall_seconds = 0.0;
  bool has_incumbent = false;
  double incumbent = 0.0;
  double best_bound = 0.0;
  double rel_gap = 0.0;
  MipStatus status = MipStatus::kLimit;
  long lp_iterations = 0;
};

struct MipLimits {
  double time_seconds = 3600.0;  // one-hour default budget
  long max_nodes = -1;           // < 0: unlimited
  double rel_gap = 1e-6;
  std::ostream* progress = nullptr;  // key=value lines, one per interval
  double progress_interval_seconds = 1.0;
};

struct MipResult {
  std::vector<double> x;  // empty when no incumbent exists
  SolveStats stats;
};

// Branch and bound over LP relaxations: best-bound node selection with
// depth-first plunging, most-fractional branching, lazy cuts added globally.
// Deterministic for identical inputs.
MipResult solve_mip(const MipProblem& problem, const CutCallback& callback = {},
                    const MipLimits& limits = {});

// Most-fractional masked variable, ties broken by lowest index. Requires at
// least one masked variable fractional beyond tol::kIntegrality.
int branch_select(const std::vector<double>& x,
                  const std::vector<uint8_t>& integral_mask);

// (bound - incumbent) / max(|bound|, tol::kGapFloor) for maximization;
// mirrored for minimization by the caller.
double relative_mip_gap(double incumbent, double bound);

}  // namespace sva
