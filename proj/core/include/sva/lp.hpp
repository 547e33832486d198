#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sva {

enum class Sense { kMaximize, kMinimize };
enum class RowRel { kLe, kEq, kGe };

struct RowEntry {
  int col;
  double coef;
};

struct LpRow {
  std::vector<RowEntry> entries;
  RowRel rel = RowRel::kLe;
  double rhs = 0.0;
};

// Abstract constraint-matrix LP. Bounds may be +-infinity. Rows are stored
// sparse; duplicate column entries within a row are not allowed.
struct LinearProgram {
  Sense sense = Sense::kMaximize;
  std::vector<double> objective;
  std::vector<double> lower, upper;
  std::vector<LpRow> rows;
  std::vector<std::string> col_names;  // optional, for dumps
  std::vector<std::string> row_names;  // optional, for dumps

  int num_cols() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_col(double obj, double lo, double up, std::string name = {});
  int add_row(LpRow row, std::string name = {});

  // Throws std::invalid_argument on NaN/infinite coefficients, column index
  // out of range, duplicate entries, or crossed bounds.
  void validate() const;
};

// Plain-text dump (debugging aid). One line per row:
//   max: 3 x0 + 2 x1;
//   r0: 1 x0 + 1 x1 <= 4;
//   bounds: 0 <= x0 <= inf; ...
std::string lp_to_text(const LinearProgram& lp);

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalFailure,
};

enum class VarStatus : uint8_t { kBasic, kAtLower, kAtUpper, kFreeNonbasic };

// Simplex basis over structural columns followed by one slack per row.
struct Basis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

// Dual sign convention (maximization): duals of <= rows are >= 0, of >= rows
// <= 0, equalities free; reduced costs are <= 0 at lower bounds and >= 0 at
// upper bounds. Signs flip for minimization. Every kOptimal result has been
// checked for primal/dual feasibility (tol::kLpFeas), complementary
// slackness, and a relative primal-dual objective gap of tol::kLpDualityRel.
struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_dual;
  std::vector<double> reduced_cost;
  Basis basis;
  long iterations = 0;
};

struct LpOptions {
  long max_iterations = -1;  // < 0: automatic (scales with problem size)
};

// Bounded-variable revised primal simplex (two phases, Bland fallback under
// degeneracy, sparse LU basis factorization with eta updates). Deterministic
// for identical inputs; numerical breakdown yields kNumericalFailure, never a
// silently wrong optimum.
LpSolution solve_lp(const LinearProgram& lp, const Basis* warm = nullptr,
                    const LpOptions& opt = {});

// Appends rows to `lp` and re-solves, warm-starting from `previous` (the new
// slacks enter the basis). Result is identical to a from-scratch solve.
LpSolution add_rows_and_resolve(LinearProgram& lp, std::span<const LpRow> rows,
                                const LpSolution& previous);

}  // namespace sva
