#include "sva/recourse.hpp"

#include <cmath>
#include <stdexcept>

#include "sva/lp.hpp"
#include "sva/tolerances.hpp"

namespace sva {

namespace {

// v-column order inside the recourse LP: UV major, edge id minor (the same
// edge enumeration as VariableIndex).
int vcol(const Instance& inst, int m, NodeId i, NodeId j) {
  const int V = inst.V();
  return m * inst.num_edges() + i * (V - 1) + j - (j > i ? 1 : 0);
}

}  // namespace

RecourseValue solve_recourse(const Instance& inst, const std::vector<double>& x,
                             const std::vector<uint8_t>& y,
                             const Scenario& scenario) {
  return solve_recourse(inst, x, std::vector<double>(y.begin(), y.end()),
                        scenario);
}

RecourseValue solve_recourse(const Instance& inst, const std::vector<double>& x,
                             const std::vector<double>& y,
                             const Scenario& scenario) {
  const int V = inst.V(), M = inst.num_uvs, S = inst.num_stations;
  if (x.size() != static_cast<size_t>(M) * V * V ||
      y.size() != static_cast<size_t>(M) * V * V) {
    throw std::invalid_argument("solve_recourse: first-stage size mismatch");
  }
  if (static_cast<int>(scenario.availability.size()) != M) {
    throw std::invalid_argument("solve_recourse: scenario size mismatch");
  }
  auto Y = [&](int m, NodeId i, NodeId j) -> double {
    return y[(static_cast<size_t>(m) * V + i) * V + j];
  };
  auto X = [&](int m, NodeId i, NodeId j) -> double {
    return x[(static_cast<size_t>(m) * V + i) * V + j];
  };

  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  for (int m = 0; m < M; ++m) {
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = 0; j < V; ++j) {
        if (i == j) continue;
        const double obj = inst.is_poi(j) ? -inst.incentive(m, j) : 0.0;
        lp.add_col(obj, 0.0, kUnbounded);
      }
    }
  }

  // Row order matters for the dual slices: flow, link, depart.
  for (int m = 0; m < M; ++m) {
    const double alpha = scenario.availability[m];
    for (int jj = 0; jj < inst.num_pois; ++jj) {
      const NodeId p = inst.poi_node(jj);
      LpRow row;
      double rhs = 0.0;
      for (NodeId i = 0; i < V; ++i) {
        if (i == p) continue;
        row.entries.push_back({vcol(inst, m, p, i), inst.f(p, i)});
        rhs += X(m, p, i) - X(m, i, p) - alpha * inst.f(p, i) * Y(m, p, i);
      }
      row.rel = RowRel::kEq;
      row.rhs = rhs;
      lp.add_row(std::move(row));
    }
  }
  for (int m = 0; m < M; ++m) {
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = 0; j < V; ++j) {
        if (i == j) continue;
        LpRow row;
        row.entries.push_back({vcol(inst, m, i, j), 1.0});
        row.rel = RowRel::kLe;
        row.rhs = Y(m, i, j);
        lp.add_row(std::move(row));
      }
    }
  }
  for (int m = 0; m < M; ++m) {
    const double alpha = scenario.availability[m];
    for (int r = 0; r < S; ++r) {
      for (NodeId i = 0; i < V; ++i) {
        if (i == r) continue;
        LpRow row;
        row.entries.push_back({vcol(inst, m, r, i), inst.f(r, i)});
        row.rel = RowRel::kEq;
        row.rhs = X(m, r, i) - alpha * inst.f(r, i) * Y(m, r, i);
        lp.add_row(std::move(row));
      }
    }
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::kInfeasible) {
    throw RecourseContractError(
        "recourse LP infeasible: first-stage (x, y) violates the fuel-flow "
        "or station-departure constraints");
  }
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error("recourse LP did not solve to optimality");
  }

  RecourseValue rv;
  rv.value = sol.objective;
  rv.v.assign(static_cast<size_t>(M) * V * V, 0.0);
  for (int m = 0; m < M; ++m) {
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = 0; j < V; ++j) {
        if (i != j) {
          rv.v[(static_cast<size_t>(m) * V + i) * V + j] =
              sol.x[vcol(inst, m, i, j)];
        }
      }
    }
  }
  const int n_flow = M * inst.num_pois;
  const int n_link = M * inst.num_edges();
  const int n_depart = M * S * (V - 1);
  rv.duals.pi_flow.assign(sol.row_dual.begin(), sol.row_dual.begin() + n_flow);
  rv.duals.pi_link.assign(sol.row_dual.begin() + n_flow,
                          sol.row_dual.begin() + n_flow + n_link);
  rv.duals.pi_depart.assign(sol.row_dual.begin() + n_flow + n_link,
                            sol.row_dual.begin() + n_flow + n_link + n_depart);
  return rv;
}

RecourseValue solve_recourse(const Instance& inst, const Plan& plan,
                             const Scenario& scenario) {
  return solve_recourse(inst, plan.cumulative_fuel, plan.edge_use, scenario);
}

double recourse_closed_form(const Instance& inst, const std::vector<uint8_t>& y,
                            const Scenario& scenario) {
  const int V = inst.V();
  double total = 0.0;
  for (int m = 0; m < inst.num_uvs; ++m) {
    if (scenario.availability[m]) continue;
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = 0; j < V; ++j) {
        if (i == j || !inst.is_poi(j)) continue;
        if (y[(static_cast<size_t>(m) * V + i) * V + j]) {
          total -= inst.incentive(m, j);
        }
      }
    }
  }
  return total;
}

double recourse_closed_form(const Instance& inst, const Plan& plan,
                            const Scenario& scenario) {
  return recourse_closed_form(inst, plan.edge_use, scenario);
}

bool check_integrality(const RecourseValue& rv) {
  for (double v : rv.v) {
    if (std::min(std::abs(v), std::abs(v - 1.0)) > tol::kIntegrality) {
      return false;
    }
  }
  return true;
}

}  // namespace sva
