#include "sva/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "sva/tolerances.hpp"

namespace sva {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;     // minimum acceptable pivot magnitude
constexpr double kZeroTol = 1e-11;     // drop tolerance in ftran results
constexpr double kEnterTol = 5e-8;     // reduced-cost threshold for entering
constexpr double kFeasEps = 1e-7;      // internal primal feasibility target
constexpr int kRefactorEvery = 100;    // eta updates between refactorizations
constexpr int kStallLimit = 60;        // degenerate pivots before Bland mode

struct Eta {
  int r;                                   // basis position replaced
  double pivot;                            // u[r]
  std::vector<std::pair<int, double>> nz;  // sparse u (excluding r)
};

// Internal minimization problem with one slack appended per row:
//   min c'x  s.t.  A x + s = b,  lo <= (x, s) <= up.
struct Work {
  int m = 0;        // rows
  int nstruct = 0;  // structural columns
  int n = 0;        // nstruct + m
  std::vector<double> c, lo, up, b;
  std::vector<std::vector<RowEntry>> cols;  // column major, entry.col = row
  double flip = 1.0;                        // -1 when user sense is maximize
};

Work build_work(const LinearProgram& lp) {
  Work w;
  w.m = lp.num_rows();
  w.nstruct = lp.num_cols();
  w.n = w.nstruct + w.m;
  w.flip = lp.sense == Sense::kMaximize ? -1.0 : 1.0;
  w.c.assign(w.n, 0.0);
  w.lo.assign(w.n, 0.0);
  w.up.assign(w.n, 0.0);
  w.b.assign(w.m, 0.0);
  w.cols.assign(w.n, {});
  for (int j = 0; j < w.nstruct; ++j) {
    w.c[j] = w.flip * lp.objective[j];
    w.lo[j] = lp.lower[j];
    w.up[j] = lp.upper[j];
  }
  for (int i = 0; i < w.m; ++i) {
    const LpRow& row = lp.rows[i];
    w.b[i] = row.rhs;
    for (const RowEntry& e : row.entries) {
      w.cols[e.col].push_back({i, e.coef});
    }
    const int s = w.nstruct + i;
    w.cols[s].push_back({i, 1.0});
    switch (row.rel) {
      case RowRel::kLe:
        w.lo[s] = 0.0;
        w.up[s] = kInf;
        break;
      case RowRel::kGe:
        w.lo[s] = -kInf;
        w.up[s] = 0.0;
        break;
      case RowRel::kEq:
        w.lo[s] = 0.0;
        w.up[s] = 0.0;
        break;
    }
  }
  return w;
}

class Simplex {
 public:
  Simplex(const Work& w, long max_iter) : w_(w), max_iter_(max_iter) {}

  LpStatus run(const Basis* warm, bool bland_from_start);

  // Available after run() returned kOptimal/kIterationLimit.
  const std::vector<double>& values() const { return xval_; }
  std::vector<double> duals_internal();  // y = B^-T c_B, true costs
  Basis basis() const;
  long iterations() const { return iter_; }
  double objective_internal() const;

 private:
  void init_basis(const Basis* warm);
  bool factorize();  // false on singular/failed factorization
  void recompute_basics();
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  double infeasibility() const;
  bool phase_costs(std::vector<double>& wc) const;  // true if phase 1 needed

  LpStatus iterate();

  const Work& w_;
  long max_iter_ = 0;
  long iter_ = 0;
  bool bland_ = false;
  int stall_ = 0;

  std::vector<int> basic_;          // size m -> variable index
  std::vector<VarStatus> vstat_;    // size n
  std::vector<double> xval_;        // size n
  std::vector<int> basic_pos_;      // size n, -1 when nonbasic

  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool lu_ok_ = false;
  std::vector<Eta> etas_;
};

void Simplex::init_basis(const Basis* warm) {
  basic_.clear();
  vstat_.assign(w_.n, VarStatus::kAtLower);
  const bool use_warm =
      warm != nullptr && static_cast<int>(warm->status.size()) == w_.n &&
      std::count(warm->status.begin(), warm->status.end(), VarStatus::kBasic) ==
          w_.m;
  for (int t = 0; t < w_.n; ++t) {
    VarStatus st;
    if (use_warm) {
      st = warm->status[t];
    } else {
      st = t >= w_.nstruct ? VarStatus::kBasic : VarStatus::kAtLower;
    }
    if (st != VarStatus::kBasic) {
      // Nonbasic variables sit on a finite bound, or at zero when free.
      if (st == VarStatus::kAtLower && w_.lo[t] == -kInf) {
        st = w_.up[t] == kInf ? VarStatus::kFreeNonbasic : VarStatus::kAtUpper;
      } else if (st == VarStatus::kAtUpper && w_.up[t] == kInf) {
        st = w_.lo[t] == -kInf ? VarStatus::kFreeNonbasic : VarStatus::kAtLower;
      } else if (st == VarStatus::kFreeNonbasic &&
                 (w_.lo[t] != -kInf || w_.up[t] != kInf)) {
        st = w_.lo[t] != -kInf ? VarStatus::kAtLower : VarStatus::kAtUpper;
      }
    }
    vstat_[t] = st;
    if (st == VarStatus::kBasic) basic_.push_back(t);
  }

  xval_.assign(w_.n, 0.0);
  basic_pos_.assign(w_.n, -1);
  for (int p = 0; p < w_.m; ++p) basic_pos_[basic_[p]] = p;
  for (int t = 0; t < w_.n; ++t) {
    switch (vstat_[t]) {
      case VarStatus::kAtLower:
        xval_[t] = w_.lo[t];
        break;
      case VarStatus::kAtUpper:
        xval_[t] = w_.up[t];
        break;
      case VarStatus::kFreeNonbasic:
        xval_[t] = 0.0;
        break;
      case VarStatus::kBasic:
        break;
    }
  }
}

bool Simplex::factorize() {
  std::vector<Eigen::Triplet<double>> trip;
  for (int p = 0; p < w_.m; ++p) {
    for (const RowEntry& e : w_.cols[basic_[p]]) {
      trip.emplace_back(e.col, p, e.coef);
    }
  }
  Eigen::SparseMatrix<double> B(w_.m, w_.m);
  B.setFromTriplets(trip.begin(), trip.end());
  B.makeCompressed();
  lu_.analyzePattern(B);
  lu_.factorize(B);
  etas_.clear();
  lu_ok_ = lu_.info() == Eigen::Success;
  return lu_ok_;
}

void Simplex::recompute_basics() {
  // x_B = B^-1 (b - N x_N)
  std::vector<double> rhs = w_.b;
  for (int t = 0; t < w_.n; ++t) {
    if (vstat_[t] == VarStatus::kBasic || xval_[t] == 0.0) continue;
    for (const RowEntry& e : w_.cols[t]) rhs[e.col] -= e.coef * xval_[t];
  }
  ftran(rhs);
  for (int p = 0; p < w_.m; ++p) xval_[basic_[p]] = rhs[p];
}

void Simplex::ftran(std::vector<double>& v) const {
  Eigen::Map<Eigen::VectorXd> mv(v.data(), w_.m);
  Eigen::VectorXd sol = lu_.solve(mv);
  std::copy(sol.data(), sol.data() + w_.m, v.begin());
  for (const Eta& e : etas_) {
    const double piv = v[e.r] / e.pivot;
    if (piv != 0.0) {
      for (const auto& [i, ui] : e.nz) v[i] -= ui * piv;
    }
    v[e.r] = piv;
  }
}

void Simplex::btran(std::vector<double>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double dot = 0.0;
    for (const auto& [i, ui] : it->nz) dot += v[i] * ui;
    v[it->r] = (v[it->r] - dot) / it->pivot;
  }
  Eigen::Map<Eigen::VectorXd> mv(v.data(), w_.m);
  Eigen::VectorXd sol = lu_.adjoint().solve(mv);
  std::copy(sol.data(), sol.data() + w_.m, v.begin());
}

double Simplex::infeasibility() const {
  double total = 0.0;
  for (int p = 0; p < w_.m; ++p) {
    const int t = basic_[p];
    if (xval_[t] < w_.lo[t]) total += w_.lo[t] - xval_[t];
    if (xval_[t] > w_.up[t]) total += xval_[t] - w_.up[t];
  }
  return total;
}

bool Simplex::phase_costs(std::vector<double>& wc) const {
  bool infeasible = false;
  wc.assign(w_.n, 0.0);
  for (int p = 0; p < w_.m; ++p) {
    const int t = basic_[p];
    const double scale = 1.0 + std::abs(xval_[t]);
    if (xval_[t] < w_.lo[t] - kFeasEps * scale) {
      wc[t] = -1.0;
      infeasible = true;
    } else if (xval_[t] > w_.up[t] + kFeasEps * scale) {
      wc[t] = 1.0;
      infeasible = true;
    }
  }
  return infeasible;
}

double Simplex::objective_internal() const {
  double obj = 0.0;
  for (int t = 0; t < w_.nstruct; ++t) obj += w_.c[t] * xval_[t];
  return obj;
}

LpStatus Simplex::iterate() {
  std::vector<double> wc, y(w_.m), u(w_.m);
  int since_recompute = 0;
  int tiny_retry = 0;
  const bool trace = std::getenv("SVA_LP_TRACE") != nullptr;

  while (true) {
    if (iter_ >= max_iter_) return LpStatus::kIterationLimit;

    const bool phase1 = phase_costs(wc);
    if (!phase1) wc = w_.c;
    if (trace && iter_ % 500 == 0) {
      std::fprintf(stderr, "[lp] it=%ld phase=%d obj=%.9g infeas=%.3g bland=%d\n",
                   iter_, phase1 ? 1 : 2, objective_internal(), infeasibility(),
                   bland_ ? 1 : 0);
    }

    // Duals for the working costs.
    for (int p = 0; p < w_.m; ++p) y[p] = wc[basic_[p]];
    btran(y);

    // Pricing: Dantzig (largest violation) or Bland (lowest index) on stall.
    int enter = -1, sigma = 0;
    double best = kEnterTol;
    for (int t = 0; t < w_.n; ++t) {
      if (vstat_[t] == VarStatus::kBasic) continue;
      if (w_.lo[t] == w_.up[t]) continue;  // fixed column, never enters
      double d = wc[t];
      for (const RowEntry& e : w_.cols[t]) d -= y[e.col] * e.coef;
      int dir = 0;
      if (vstat_[t] == VarStatus::kAtLower && d < -kEnterTol) dir = 1;
      if (vstat_[t] == VarStatus::kAtUpper && d > kEnterTol) dir = -1;
      if (vstat_[t] == VarStatus::kFreeNonbasic && std::abs(d) > kEnterTol) {
        dir = d < 0 ? 1 : -1;
      }
      if (dir == 0) continue;
      if (bland_) {
        enter = t;
        sigma = dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = t;
        sigma = dir;
      }
    }

    if (enter < 0) {
      if (phase1) return LpStatus::kInfeasible;
      return LpStatus::kOptimal;
    }

    // u = B^-1 a_enter
    std::fill(u.begin(), u.end(), 0.0);
    for (const RowEntry& e : w_.cols[enter]) u[e.col] = e.coef;
    ftran(u);

    // Harris-style two-pass ratio test. Basic p moves at rate -sigma*u[p];
    // in phase 1 a variable violating a bound blocks only when moving toward
    // it (it lands exactly on the bound and becomes feasible). Pass one
    // computes the relaxed limit (each row may overshoot its bound by the
    // feasibility tolerance); pass two picks the numerically largest pivot
    // among rows whose exact ratio fits under that limit.
    struct Block {
      int pos;
      double ratio;    // exact step at which the row hits its bound
      double relaxed;  // step at which it exceeds the bound by the tolerance
      double bound;
    };
    std::vector<Block> blocks;
    for (int p = 0; p < w_.m; ++p) {
      if (std::abs(u[p]) <= kZeroTol) continue;
      const int t = basic_[p];
      const double rate = -sigma * u[p];
      const double cur = xval_[t];
      const double scale = 1.0 + std::abs(cur);
      double bound = 0.0, ratio = kInf;
      if (cur < w_.lo[t] - kFeasEps * scale) {
        if (rate > 0) {
          bound = w_.lo[t];
          ratio = (bound - cur) / rate;
        }
      } else if (cur > w_.up[t] + kFeasEps * scale) {
        if (rate < 0) {
          bound = w_.up[t];
          ratio = (cur - bound) / (-rate);
        }
      } else if (rate > 0) {
        if (w_.up[t] < kInf) {
          bound = w_.up[t];
          ratio = std::max(0.0, (bound - cur) / rate);
        }
      } else {
        if (w_.lo[t] > -kInf) {
          bound = w_.lo[t];
          ratio = std::max(0.0, (cur - bound) / (-rate));
        }
      }
      if (ratio < kInf) {
        const double slack = kFeasEps * scale / std::abs(rate);
        blocks.push_back({p, ratio, ratio + slack, bound});
      }
    }

    const double own_range = w_.up[enter] - w_.lo[enter];
    const bool flippable =
        vstat_[enter] != VarStatus::kFreeNonbasic && own_range < kInf;
    double t_lim = flippable ? own_range : kInf;
    for (const Block& b : blocks) t_lim = std::min(t_lim, b.relaxed);

    double step = kInf;
    int leave_pos = -1;
    double leave_to = 0.0;  // bound the leaving variable lands on
    if (t_lim < kInf) {
      double best_piv = 0.0;
      for (const Block& b : blocks) {
        if (b.ratio > t_lim) continue;
        const bool better =
            bland_ ? (leave_pos < 0 || basic_[b.pos] < basic_[leave_pos])
                   : std::abs(u[b.pos]) > best_piv;
        if (better) {
          leave_pos = b.pos;
          leave_to = b.bound;
          best_piv = std::abs(u[b.pos]);
          step = b.ratio;
        }
      }
      if (flippable && (leave_pos < 0 || own_range <= step)) {
        // The entering variable reaches its other bound first: bound flip.
        leave_pos = -1;
        step = own_range;
      }
      step = std::max(0.0, step);
    }

    if (step == kInf) {
      // Nothing blocks: unbounded in phase 2, numerical trouble in phase 1.
      if (phase1 && trace) {
        std::fprintf(stderr, "[lp] phase-1 ray: enter=%d sigma=%d iter=%ld\n",
                     enter, sigma, iter_);
      }
      return phase1 ? LpStatus::kNumericalFailure : LpStatus::kUnbounded;
    }

    if (leave_pos >= 0 && std::abs(u[leave_pos]) < kPivotTol) {
      // Pivot too small to trust; refresh the factorization and retry.
      if (++tiny_retry > 2) {
        if (trace) {
          std::fprintf(stderr, "[lp] tiny pivot persists: enter=%d iter=%ld\n",
                       enter, iter_);
        }
        return LpStatus::kNumericalFailure;
      }
      if (!factorize()) return LpStatus::kNumericalFailure;
      recompute_basics();
      continue;
    }
    tiny_retry = 0;

    ++iter_;
    const bool degenerate = step <= 1e-10;
    stall_ = degenerate ? stall_ + 1 : 0;
    if (stall_ > kStallLimit) bland_ = true;
    if (!degenerate && bland_) {
      bland_ = false;
      stall_ = 0;
    }

    // Apply the step.
    if (step > 0.0) {
      for (int p = 0; p < w_.m; ++p) {
        if (std::abs(u[p]) > kZeroTol) {
          xval_[basic_[p]] -= sigma * step * u[p];
        }
      }
      xval_[enter] += sigma * step;
    }

    if (leave_pos < 0) {
      // Bound flip of the entering variable.
      vstat_[enter] = sigma > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      xval_[enter] = sigma > 0 ? w_.up[enter] : w_.lo[enter];
    } else {
      const int leaving = basic_[leave_pos];
      vstat_[leaving] = leave_to == w_.lo[leaving] ? VarStatus::kAtLower
                                                   : VarStatus::kAtUpper;
      xval_[leaving] = leave_to;
      basic_pos_[leaving] = -1;
      basic_[leave_pos] = enter;
      basic_pos_[enter] = leave_pos;
      vstat_[enter] = VarStatus::kBasic;

      Eta eta;
      eta.r = leave_pos;
      eta.pivot = u[leave_pos];
      for (int p = 0; p < w_.m; ++p) {
        if (p != leave_pos && std::abs(u[p]) > kZeroTol) {
          eta.nz.emplace_back(p, u[p]);
        }
      }
      etas_.push_back(std::move(eta));
      if (static_cast<int>(etas_.size()) >= kRefactorEvery) {
        if (!factorize()) return LpStatus::kNumericalFailure;
        recompute_basics();
      }
    }

    if (++since_recompute >= 4 * kRefactorEvery) {
      // Periodic drift control for long bound-flip streaks.
      if (!factorize()) return LpStatus::kNumericalFailure;
      recompute_basics();
      since_recompute = 0;
    }
  }
}

LpStatus Simplex::run(const Basis* warm, bool bland_from_start) {
  bland_ = bland_from_start;
  stall_ = 0;
  iter_ = 0;
  init_basis(warm);
  if (!factorize()) {
    if (warm == nullptr) return LpStatus::kNumericalFailure;
    init_basis(nullptr);  // singular warm basis: cold restart
    if (!factorize()) return LpStatus::kNumericalFailure;
  }
  recompute_basics();
  LpStatus st = iterate();
  if (st == LpStatus::kOptimal || st == LpStatus::kIterationLimit) {
    if (!factorize()) return LpStatus::kNumericalFailure;
    recompute_basics();  // final values from a fresh factorization
  }
  return st;
}

std::vector<double> Simplex::duals_internal() {
  std::vector<double> y(w_.m);
  for (int p = 0; p < w_.m; ++p) y[p] = w_.c[basic_[p]];
  btran(y);
  return y;
}

Basis Simplex::basis() const {
  Basis b;
  b.status = vstat_;
  return b;
}

// Verifies the optimality certificate: primal feasibility, dual sign
// conditions, complementary slackness, and the primal-dual objective
// identity. Returns an empty string when everything holds.
std::string verify_optimal(const LinearProgram& lp, const LpSolution& sol) {
  std::ostringstream bad;
  const int n = lp.num_cols(), m = lp.num_rows();
  double cmax = 1.0;
  for (double cj : lp.objective) cmax = std::max(cmax, std::abs(cj));
  const double dual_tol = tol::kLpFeas * 10.0 * cmax;

  for (int j = 0; j < n; ++j) {
    const double s = 1.0 + std::abs(sol.x[j]);
    if (sol.x[j] < lp.lower[j] - tol::kLpFeas * s ||
        sol.x[j] > lp.upper[j] + tol::kLpFeas * s) {
      bad << "col " << j << " out of bounds; ";
    }
  }

  std::vector<double> activity(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (const RowEntry& e : lp.rows[i].entries) {
      activity[i] += e.coef * sol.x[e.col];
    }
    const double rhs = lp.rows[i].rhs;
    const double s = tol::kLpFeas * (1.0 + std::abs(rhs) + std::abs(activity[i]));
    const double viol = lp.rows[i].rel == RowRel::kLe   ? activity[i] - rhs
                        : lp.rows[i].rel == RowRel::kGe ? rhs - activity[i]
                                                        : std::abs(activity[i] - rhs);
    if (viol > s) bad << "row " << i << " infeasible by " << viol << "; ";
  }

  const double sgn = lp.sense == Sense::kMaximize ? 1.0 : -1.0;
  for (int i = 0; i < m; ++i) {
    const double yi = sgn * sol.row_dual[i];  // >= 0 expected on <= rows (max)
    if (lp.rows[i].rel == RowRel::kLe && yi < -dual_tol) {
      bad << "row " << i << " dual sign; ";
    }
    if (lp.rows[i].rel == RowRel::kGe && yi > dual_tol) {
      bad << "row " << i << " dual sign; ";
    }
    const double slack = std::abs(lp.rows[i].rhs - activity[i]);
    if (slack > 1e-5 * (1.0 + std::abs(lp.rows[i].rhs)) &&
        std::abs(sol.row_dual[i]) > dual_tol) {
      bad << "row " << i << " complementary slackness; ";
    }
  }
  for (int j = 0; j < n; ++j) {
    const double dj = sgn * sol.reduced_cost[j];  // max: <= 0 at lower bound
    const double sl = sol.x[j] - lp.lower[j];
    const double su = lp.upper[j] - sol.x[j];
    const bool off_lower = sl > 1e-5 * (1.0 + std::abs(lp.lower[j]));
    const bool off_upper = su > 1e-5 * (1.0 + std::abs(lp.upper[j]));
    // A column at both bounds (fixed) carries no sign requirement.
    if (off_lower && off_upper && std::abs(dj) > dual_tol) {
      bad << "col " << j << " nonzero reduced cost off its bounds; ";
    } else if (!off_lower && off_upper && dj > dual_tol) {
      bad << "col " << j << " reduced-cost sign at lower; ";
    } else if (off_lower && !off_upper && dj < -dual_tol) {
      bad << "col " << j << " reduced-cost sign at upper; ";
    }
  }

  double dual_obj = 0.0;
  for (int i = 0; i < m; ++i) dual_obj += sol.row_dual[i] * lp.rows[i].rhs;
  for (int j = 0; j < n; ++j) dual_obj += sol.reduced_cost[j] * sol.x[j];
  if (std::abs(dual_obj - sol.objective) >
      tol::kLpDualityRel * std::max(1.0, std::abs(sol.objective))) {
    bad << "duality gap " << dual_obj - sol.objective << "; ";
  }
  return bad.str();
}

LpSolution extract(const LinearProgram& lp, const Work& w, Simplex& sx,
                   LpStatus st) {
  LpSolution sol;
  sol.status = st;
  sol.iterations = sx.iterations();
  const int n = lp.num_cols(), m = lp.num_rows();
  if (st != LpStatus::kOptimal && st != LpStatus::kIterationLimit) return sol;

  sol.x.assign(sx.values().begin(), sx.values().begin() + n);
  std::vector<double> y = sx.duals_internal();
  sol.row_dual.resize(m);
  for (int i = 0; i < m; ++i) sol.row_dual[i] = w.flip * y[i];
  sol.reduced_cost.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = w.c[j];
    for (const RowEntry& e : w.cols[j]) d -= y[e.col] * e.coef;
    sol.reduced_cost[j] = w.flip * d;
  }
  sol.basis = sx.basis();
  sol.objective = w.flip * sx.objective_internal();
  return sol;
}

// A rowless LP is solved directly on the bounds.
LpSolution solve_boxed(const LinearProgram& lp) {
  LpSolution sol;
  sol.x.assign(lp.num_cols(), 0.0);
  sol.reduced_cost = lp.objective;
  sol.basis.status.assign(lp.num_cols(), VarStatus::kAtLower);
  const double sgn = lp.sense == Sense::kMaximize ? 1.0 : -1.0;
  double obj = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j) {
    const bool wants_up = sgn * lp.objective[j] > 0.0;
    const double pick = wants_up ? lp.upper[j] : lp.lower[j];
    if (std::isinf(pick) && lp.objective[j] != 0.0) {
      sol.status = LpStatus::kUnbounded;
      return sol;
    }
    if (std::isinf(pick)) {
      sol.x[j] = std::isinf(lp.lower[j]) ? 0.0 : lp.lower[j];
      if (std::isinf(sol.x[j])) sol.x[j] = 0.0;
    } else {
      sol.x[j] = pick;
    }
    sol.basis.status[j] = sol.x[j] == lp.upper[j] && !std::isinf(lp.upper[j])
                              ? VarStatus::kAtUpper
                              : VarStatus::kAtLower;
    obj += lp.objective[j] * sol.x[j];
  }
  sol.objective = obj;
  sol.status = LpStatus::kOptimal;
  return sol;
}

LpSolution solve_impl(const LinearProgram& lp, const Basis* warm,
                      const LpOptions& opt) {
  lp.validate();
  if (lp.num_rows() == 0) return solve_boxed(lp);
  const Work w = build_work(lp);
  long max_iter = opt.max_iterations;
  if (max_iter < 0) max_iter = 200L * (w.m + w.n) + 10000;

  for (int attempt = 0; attempt < 2; ++attempt) {
    Simplex sx(w, max_iter);
    const Basis* start = attempt == 0 ? warm : nullptr;
    LpStatus st = sx.run(start, /*bland_from_start=*/attempt > 0);
    LpSolution sol = extract(lp, w, sx, st);
    if (st == LpStatus::kOptimal) {
      const std::string bad = verify_optimal(lp, sol);
      if (bad.empty()) return sol;
      if (std::getenv("SVA_LP_TRACE") != nullptr) {
        std::fprintf(stderr, "[lp] verification failed (attempt %d): %s\n",
                     attempt, bad.c_str());
      }
      if (attempt > 0) {
        sol.status = LpStatus::kNumericalFailure;
        return sol;  // never report an unverified optimum
      }
      continue;  // retry cold with Bland
    }
    if (st == LpStatus::kNumericalFailure && attempt == 0) continue;
    return sol;
  }
  LpSolution fail;
  fail.status = LpStatus::kNumericalFailure;
  return fail;
}

}  // namespace

int LinearProgram::add_col(double obj, double lo, double up, std::string name) {
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(up);
  if (!name.empty() || !col_names.empty()) {
    col_names.resize(objective.size());
    col_names.back() = std::move(name);
  }
  return num_cols() - 1;
}

int LinearProgram::add_row(LpRow row, std::string name) {
  rows.push_back(std::move(row));
  if (!name.empty() || !row_names.empty()) {
    row_names.resize(rows.size());
    row_names.back() = std::move(name);
  }
  return num_rows() - 1;
}

void LinearProgram::validate() const {
  const int n = num_cols();
  if (static_cast<int>(lower.size()) != n ||
      static_cast<int>(upper.size()) != n) {
    throw std::invalid_argument("lp: bound vectors sized differently from objective");
  }
  for (int j = 0; j < n; ++j) {
    if (std::isnan(objective[j]) || std::isinf(objective[j])) {
      throw std::invalid_argument("lp: non-finite objective coefficient");
    }
    if (lower[j] > upper[j]) {
      throw std::invalid_argument("lp: crossed bounds on column " + std::to_string(j));
    }
  }
  std::vector<int> seen(n, -1);
  for (int i = 0; i < num_rows(); ++i) {
    const LpRow& row = rows[i];
    if (std::isnan(row.rhs) || std::isinf(row.rhs)) {
      throw std::invalid_argument("lp: non-finite rhs in row " + std::to_string(i));
    }
    for (const RowEntry& e : row.entries) {
      if (e.col < 0 || e.col >= n) {
        throw std::invalid_argument("lp: column index out of range in row " +
                                    std::to_string(i));
      }
      if (!std::isfinite(e.coef)) {
        throw std::invalid_argument("lp: non-finite coefficient in row " +
                                    std::to_string(i));
      }
      if (seen[e.col] == i) {
        throw std::invalid_argument("lp: duplicate column entry in row " +
                                    std::to_string(i));
      }
      seen[e.col] = i;
    }
  }
}

std::string lp_to_text(const LinearProgram& lp) {
  auto cname = [&lp](int j) {
    if (j < static_cast<int>(lp.col_names.size()) && !lp.col_names[j].empty()) {
      return lp.col_names[j];
    }
    return "x" + std::to_string(j);
  };
  std::ostringstream os;
  os << (lp.sense == Sense::kMaximize ? "max: " : "min: ");
  bool first = true;
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (lp.objective[j] == 0.0) continue;
    if (!first) os << " + ";
    os << lp.objective[j] << " " << cname(j);
    first = false;
  }
  if (first) os << "0";
  os << ";\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (i < static_cast<int>(lp.row_names.size()) && !lp.row_names[i].empty()) {
      os << lp.row_names[i];
    } else {
      os << "r" << i;
    }
    os << ":";
    for (const RowEntry& e : lp.rows[i].entries) {
      os << " " << (e.coef >= 0 ? "+" : "-") << " " << std::abs(e.coef) << " "
         << cname(e.col);
    }
    switch (lp.rows[i].rel) {
      case RowRel::kLe: os << " <= "; break;
      case RowRel::kEq: os << " = "; break;
      case RowRel::kGe: os << " >= "; break;
    }
    os << lp.rows[i].rhs << ";\n";
  }
  os << "bounds:";
  for (int j = 0; j < lp.num_cols(); ++j) {
    os << " " << lp.lower[j] << " <= " << cname(j) << " <= " << lp.upper[j] << ";";
  }
  os << "\n";
  return os.str();
}

LpSolution solve_lp(const LinearProgram& lp, const Basis* warm,
                    const LpOptions& opt) {
  return solve_impl(lp, warm, opt);
}

LpSolution add_rows_and_resolve(LinearProgram& lp, std::span<const LpRow> rows,
                                const LpSolution& previous) {
  const int old_rows = lp.num_rows();
  for (const LpRow& r : rows) lp.add_row(r);
  Basis warm = previous.basis;
  if (!warm.empty() &&
      static_cast<int>(warm.status.size()) == lp.num_cols() + old_rows) {
    warm.status.resize(lp.num_cols() + lp.num_rows(), VarStatus::kBasic);
    return solve_impl(lp, &warm, {});
  }
  return solve_impl(lp, nullptr, {});
}

}  // namespace sva
