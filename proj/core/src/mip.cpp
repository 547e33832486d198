#include "sva/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>
#include <cstdlib>
#include <cstdio>
#include <stdexcept>

#include "sva/tolerances.hpp"

namespace sva {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Node {
  long id = 0;
  long parent = -1;
  double bound = kInf;  // parent LP objective (max form)
  int depth = 0;
  int var = -1;  // bound change applied at this node
  double new_lo = 0.0, new_up = 0.0;
};

struct OpenOrder {
  // Max-heap on bound, FIFO on id among equals.
  bool operator()(const std::pair<double, long>& a,
                  const std::pair<double, long>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  }
};

}  // namespace

void MipProblem::validate() const {
  lp.validate();
  if (integral.size() != static_cast<size_t>(lp.num_cols())) {
    throw std::invalid_argument("integrality mask size mismatch");
  }
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (integral[j] && (std::isinf(lp.lower[j]) || std::isinf(lp.upper[j]))) {
      throw std::invalid_argument("integral column " + std::to_string(j) +
                                  " must have finite bounds");
    }
  }
}

int branch_select(const std::vector<double>& x,
                  const std::vector<uint8_t>& integral_mask) {
  int best = -1;
  double best_score = tol::kIntegrality;
  for (size_t j = 0; j < x.size(); ++j) {
    if (j < integral_mask.size() && !integral_mask[j]) continue;
    const double frac = x[j] - std::floor(x[j]);
    const double score = 0.5 - std::abs(frac - 0.5);  // distance to nearest int
    if (score > best_score + 1e-12) {
      best_score = score;
      best = static_cast<int>(j);
    }
  }
  if (best < 0) {
    throw std::invalid_argument("branch_select: no fractional masked variable");
  }
  return best;
}

double relative_mip_gap(double incumbent, double bound) {
  return (bound - incumbent) / std::max(std::abs(bound), tol::kGapFloor);
}

MipResult solve_mip(const MipProblem& problem, const CutCallback& callback,
                    const MipLimits& limits) {
  problem.validate();
  const auto t0 = std::chrono::steady_clock::now();

  // Work on a maximization copy; flip the objective back on exit.
  const bool flip = problem.lp.sense == Sense::kMinimize;
  LinearProgram lp = problem.lp;
  lp.sense = Sense::kMaximize;
  if (flip) {
    for (double& c : lp.objective) c = -c;
  }
  const std::vector<uint8_t>& mask = problem.integral;
  const std::vector<double> root_lower = lp.lower, root_upper = lp.upper;

  MipResult res;
  SolveStats& st = res.stats;
  st.best_bound = kInf;

  std::vector<Node> arena;
  std::priority_queue<std::pair<double, long>, std::vector<std::pair<double, long>>,
                      OpenOrder>
      open;
  arena.push_back(Node{});

  double incumbent = -kInf;
  std::vector<double> incumbent_x;
  double reported_bound = kInf;
  bool hit_limit = false;
  bool unbounded = false;
  Basis last_basis;
  double next_progress = 0.0;

  auto prune_eps = [&incumbent]() {
    return 1e-9 * std::max(1.0, std::abs(incumbent));
  };

  auto apply_bounds = [&](long node_id) {
    lp.lower = root_lower;
    lp.upper = root_upper;
    for (long a = node_id; a > 0; a = arena[a].parent) {
      const Node& nd = arena[a];
      lp.lower[nd.var] = std::max(lp.lower[nd.var], nd.new_lo);
      lp.upper[nd.var] = std::min(lp.upper[nd.var], nd.new_up);
    }
  };

  auto open_top_bound = [&]() {
    while (!open.empty()) {
      const auto [bd, id] = open.top();
      if (incumbent > -kInf && bd <= incumbent + prune_eps()) {
        open.pop();  // pruned by bound
        continue;
      }
      return bd;
    }
    return -kInf;
  };

  auto emit_progress = [&](double elapsed, double plunge_bound) {
    if (limits.progress == nullptr || elapsed < next_progress) return;
    next_progress = elapsed + limits.progress_interval_seconds;
    double bd = std::max(incumbent, std::max(open_top_bound(), plunge_bound));
    bd = std::min(bd, reported_bound);
    const double sgn = flip ? -1.0 : 1.0;
    *limits.progress << "progress nodes=" << st.nodes << " incumbent="
                     << (incumbent > -kInf ? sgn * incumbent : sgn * -kInf)
                     << " bound=" << sgn * bd
                     << " gap=" << relative_mip_gap(incumbent, bd)
                     << " sec_cuts=" << st.subtour_cuts
                     << " benders_cuts=" << st.benders_cuts << "\n";
  };

  // Fix-and-dive rounding heuristic: from a fractional LP solution, fix the
  // least-fractional masked variable to its rounded value and re-solve until
  // the point is integral (candidate incumbent) or the LP goes infeasible.
  // Cuts discovered on the way join the global pool. Bounds are rebuilt per
  // node, so the dive may scribble on lp.lower/upper freely.
  auto dive_for_incumbent = [&](const LpSolution& from) {
    const bool trace = std::getenv("SVA_MIP_TRACE") != nullptr;
    LpSolution sol = from;
    std::vector<uint8_t> fixed(lp.num_cols(), 0);
    for (int round = 0; round <= lp.num_cols(); ++round) {
      if (trace) {
        std::fprintf(stderr, "[dive] round=%d status=%d obj=%.6g\n", round,
                     static_cast<int>(sol.status), sol.objective);
      }
      int pick = -1;
      double best_frac = 2.0;
      bool integral = true;
      for (int j = 0; j < lp.num_cols(); ++j) {
        if (!mask[j]) continue;
        const double frac = std::abs(sol.x[j] - std::round(sol.x[j]));
        if (frac > tol::kIntegrality) {
          integral = false;
          if (!fixed[j] && frac < best_frac) {
            best_frac = frac;
            pick = j;
          }
        }
      }
      if (integral) {
        std::vector<Cut> cuts;
        if (callback) cuts = callback(sol.x);
        if (cuts.empty()) {
          if (incumbent <= -kInf ||
            sol.objective > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent))) {
            incumbent = sol.objective;
            incumbent_x = sol.x;
          }
          return;
        }
        std::vector<LpRow> rows;
        for (const Cut& cut : cuts) {
          switch (cut.kind) {
            case CutKind::kSubTour: ++st.subtour_cuts; break;
            case CutKind::kBendersOptimality: ++st.benders_cuts; break;
            case CutKind::kUser: ++st.user_cuts; break;
          }
          rows.push_back(cut.row);
        }
        sol = add_rows_and_resolve(lp, rows, sol);
      } else {
        if (pick < 0) return;  // every fractional variable already pinned
        const double lo_save = lp.lower[pick], up_save = lp.upper[pick];
        const double target = std::round(sol.x[pick]);
        lp.lower[pick] = lp.upper[pick] = target;
        fixed[pick] = 1;
        LpSolution next = solve_lp(lp, &sol.basis);
        if (next.status == LpStatus::kInfeasible) {
          // One-level backtrack: try the other neighboring integer.
          const double other =
              target > sol.x[pick] ? std::floor(sol.x[pick]) : std::ceil(sol.x[pick]);
          if (other >= lo_save && other <= up_save && other != target) {
            lp.lower[pick] = lp.upper[pick] = other;
            next = solve_lp(lp, &sol.basis);
          }
        }
        sol = std::move(next);
      }
      if (sol.status != LpStatus::kOptimal) {
        if (trace) {
          std::fprintf(stderr, "[dive] abort status=%d\n",
                       static_cast<int>(sol.status));
        }
        return;
      }
      st.lp_iterations += sol.iterations;
      if (incumbent > -kInf && sol.objective <= incumbent + prune_eps()) return;
      if (now_seconds(t0) > limits.time_seconds) return;
    }
  };
  long next_dive_when_empty = 1;  // node counts that trigger a heuristic dive
  long next_dive_with_inc = 500;

  long plunge = 0;  // next node to process depth-first; 0 = root sentinel
  bool have_plunge = true;

  while (true) {
    const double elapsed = now_seconds(t0);
    if (elapsed > limits.time_seconds ||
        (limits.max_nodes >= 0 && st.nodes >= limits.max_nodes)) {
      hit_limit = true;
      break;
    }

    long node_id;
    if (have_plunge) {
      node_id = plunge;
      have_plunge = false;
    } else {
      if (open.empty()) break;
      const auto [bd, id] = open.top();
      open.pop();
      if (incumbent > -kInf && bd <= incumbent + prune_eps()) continue;
      node_id = id;
    }
    const Node& node = arena[node_id];
    if (incumbent > -kInf && node.bound <= incumbent + prune_eps()) continue;

    apply_bounds(node_id);
    ++st.nodes;

    LpSolution sol = solve_lp(lp, last_basis.empty() ? nullptr : &last_basis);
    bool accepted = false;
    double node_bound = node.bound;
    while (true) {
      if (sol.status == LpStatus::kInfeasible) break;
      if (sol.status == LpStatus::kUnbounded) {
        unbounded = true;
        break;
      }
      if (sol.status != LpStatus::kOptimal) {
        throw std::runtime_error(
            "lp engine failed inside branch and bound (status " +
            std::to_string(static_cast<int>(sol.status)) + ", node " +
            std::to_string(st.nodes) + ")");
      }
      st.lp_iterations += sol.iterations;
      last_basis = sol.basis;
      node_bound = std::min(node_bound, sol.objective);
      if (incumbent > -kInf && node_bound <= incumbent + prune_eps()) break;

      // Fractional: branch.
      bool is_integral = true;
      for (int j = 0; j < lp.num_cols(); ++j) {
        if (mask[j] &&
            std::abs(sol.x[j] - std::round(sol.x[j])) > tol::kIntegrality) {
          is_integral = false;
          break;
        }
      }
      if (!is_integral) {
        // Periodic rounding dives supply incumbents the plain tree search is
        // slow to reach on degenerate routing relaxations.
        const bool want_dive = incumbent <= -kInf
                                   ? st.nodes >= next_dive_when_empty
                                   : st.nodes >= next_dive_with_inc;
        if (want_dive) {
          if (incumbent <= -kInf) {
            next_dive_when_empty = st.nodes + 50;
          } else {
            next_dive_with_inc = st.nodes + 500;
          }
          dive_for_incumbent(sol);
          apply_bounds(node_id);  // the dive scribbles on the bounds
          sol = solve_lp(lp, &sol.basis);
          if (sol.status == LpStatus::kInfeasible) break;
          if (sol.status != LpStatus::kOptimal) {
            throw std::runtime_error(
                "lp engine failed after heuristic dive (status " +
                std::to_string(static_cast<int>(sol.status)) + ")");
          }
          node_bound = std::min(node_bound, sol.objective);
          if (incumbent > -kInf && node_bound <= incumbent + prune_eps()) break;
          continue;  // candidate may have changed; re-run the node logic
        }
        const int v = branch_select(sol.x, mask);
        const double xv = sol.x[v];
        const int node_depth = node.depth;
        Node down, up;
        down.parent = up.parent = node_id;
        down.bound = up.bound = node_bound;
        down.depth = up.depth = node_depth + 1;
        down.var = up.var = v;
        down.new_lo = root_lower[v];
        down.new_up = std::floor(xv);
        up.new_lo = std::ceil(xv);
        up.new_up = root_upper[v];
        const bool up_first = xv - std::floor(xv) >= 0.5;
        Node first = up_first ? up : down;
        Node second = up_first ? down : up;
        first.id = static_cast<long>(arena.size());
        arena.push_back(first);
        second.id = static_cast<long>(arena.size());
        arena.push_back(second);
        open.push({second.bound, second.id});
        plunge = first.id;
        have_plunge = true;
        break;
      }

      // Integral candidate: consult the lazy-cut callback.
      std::vector<Cut> cuts;
      if (callback) cuts = callback(sol.x);
      if (cuts.empty()) {
        if (incumbent <= -kInf ||
            sol.objective > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent))) {
          incumbent = sol.objective;
          incumbent_x = sol.x;
        }
        accepted = true;
        break;
      }
      std::vector<LpRow> rows;
      rows.reserve(cuts.size());
      for (const Cut& cut : cuts) {
        double act = 0.0;
        for (const RowEntry& e : cut.row.entries) act += e.coef * sol.x[e.col];
        const double viol = cut.row.rel == RowRel::kLe   ? act - cut.row.rhs
                            : cut.row.rel == RowRel::kGe ? cut.row.rhs - act
                                                         : std::abs(act - cut.row.rhs);
        if (viol <= tol::kCutViolation) {
          throw std::logic_error("cut callback returned a non-violated cut (" +
                                 cut.name + ")");
        }
        switch (cut.kind) {
          case CutKind::kSubTour: ++st.subtour_cuts; break;
          case CutKind::kBendersOptimality: ++st.benders_cuts; break;
          case CutKind::kUser: ++st.user_cuts; break;
        }
        rows.push_back(cut.row);
      }
      // Cuts are valid globally; they join the shared LP seen by all nodes.
      sol = add_rows_and_resolve(lp, rows, sol);
      if (now_seconds(t0) > limits.time_seconds) {
        hit_limit = true;
        break;
      }
    }
    if (unbounded) break;

    double plunge_bound = have_plunge ? arena[plunge].bound : -kInf;
    reported_bound = std::min(
        reported_bound,
        std::max(incumbent, std::max(open_top_bound(), plunge_bound)));
    emit_progress(now_seconds(t0), plunge_bound);
    (void)accepted;

    if (!have_plunge && open.empty()) break;

    if (incumbent > -kInf && limits.rel_gap > 0.0) {
      const double bd = std::max(incumbent, std::max(open_top_bound(),
                                                     plunge_bound));
      if (relative_mip_gap(incumbent, std::min(bd, reported_bound)) <=
          limits.rel_gap) {
        break;
      }
    }
  }

  st.wall_seconds = now_seconds(t0);
  st.has_incumbent = incumbent > -kInf;
  if (unbounded) {
    st.status = MipStatus::kUnbounded;
    st.best_bound = kInf;
    st.rel_gap = kInf;
    return res;
  }

  double final_bound;
  if (hit_limit) {
    st.status = MipStatus::kLimit;
    const double plunge_bound = have_plunge ? arena[plunge].bound : -kInf;
    final_bound = std::max(incumbent, std::max(open_top_bound(), plunge_bound));
    final_bound = std::min(final_bound, reported_bound);
  } else if (st.has_incumbent) {
    // Tree exhausted (or gap limit met).
    const double plunge_bound = have_plunge ? arena[plunge].bound : -kInf;
    const double remaining = std::max(open_top_bound(), plunge_bound);
    final_bound = std::max(incumbent, remaining);
    final_bound = std::min(final_bound, reported_bound);
    st.status = relative_mip_gap(incumbent, final_bound) <= limits.rel_gap
                    ? MipStatus::kOptimal
                    : MipStatus::kLimit;
    if (remaining == -kInf) {
      final_bound = incumbent;
      st.status = MipStatus::kOptimal;
    }
  } else {
    st.status = MipStatus::kInfeasible;
    final_bound = -kInf;
  }

  const double sgn = flip ? -1.0 : 1.0;
  st.incumbent = st.has_incumbent ? sgn * incumbent : 0.0;
  st.best_bound = sgn * final_bound;
  st.rel_gap = st.has_incumbent ? relative_mip_gap(incumbent, final_bound)
                                : kInf;
  if (st.has_incumbent) res.x = std::move(incumbent_x);
  return res;
}

}  // namespace sva
