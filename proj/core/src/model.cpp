#include "sva/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sva/tolerances.hpp"

namespace sva {

namespace {

std::string node_label(const Instance& inst, NodeId v) {
  if (v >= 0 && v < static_cast<int>(inst.node_names.size()) &&
      !inst.node_names[v].empty()) {
    return inst.node_names[v];
  }
  return "#" + std::to_string(v);
}

}  // namespace

double Instance::total_incentive() const {
  return std::accumulate(incentives.begin(), incentives.end(), 0.0);
}

void validate_scenarios(const ScenarioSet& scen) {
  if (scen.scenarios.empty()) {
    throw std::invalid_argument("scenario set is empty");
  }
  if (scen.num_uvs <= 0) {
    throw std::invalid_argument("scenario set has no UVs");
  }
  double total = 0.0;
  for (const Scenario& s : scen.scenarios) {
    if (static_cast<int>(s.availability.size()) != scen.num_uvs) {
      throw std::invalid_argument("scenario availability size mismatch");
    }
    for (uint8_t a : s.availability) {
      if (a != 0 && a != 1) {
        throw std::invalid_argument("scenario availability must be 0 or 1");
      }
    }
    if (s.probability < 0.0) {
      throw std::invalid_argument("scenario probability is negative");
    }
    total += s.probability;
  }
  if (std::abs(total - 1.0) > tol::kProbSum) {
    throw std::invalid_argument("scenario probabilities sum to " +
                                std::to_string(total) + ", expected 1");
  }
}

Plan make_empty_plan(const Instance& inst) {
  Plan p;
  p.num_uvs = inst.num_uvs;
  p.num_stations = inst.num_stations;
  p.num_nodes = inst.V();
  p.edge_use.assign(static_cast<size_t>(inst.num_uvs) * inst.V() * inst.V(), 0);
  p.cumulative_fuel.assign(p.edge_use.size(), 0.0);
  p.station_use.assign(static_cast<size_t>(inst.num_uvs) * inst.num_stations, 0);
  return p;
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  auto add = [&rep](InstanceViolation kind, std::vector<int> where,
                    std::string msg) {
    rep.issues.push_back({kind, std::move(where), std::move(msg)});
  };

  if (inst.num_pois < 1) add(InstanceViolation::kNoPois, {}, "instance has no POIs");
  if (inst.num_uvs < 1) add(InstanceViolation::kNoUvs, {}, "instance has no UVs");
  if (inst.num_stations < 1) {
    add(InstanceViolation::kNoBase, {}, "instance has no base station r0");
  }

  const int V = inst.V();
  const bool dims_ok =
      static_cast<int>(inst.coords.size()) == V &&
      static_cast<int>(inst.fuel_cost.size()) == V * V &&
      static_cast<int>(inst.incentives.size()) == inst.num_uvs * inst.num_pois &&
      static_cast<int>(inst.fuel_capacity.size()) == inst.num_uvs &&
      static_cast<int>(inst.distance_budget.size()) == inst.num_uvs &&
      (inst.node_names.empty() ||
       static_cast<int>(inst.node_names.size()) == V);
  if (!dims_ok) {
    add(InstanceViolation::kBadDimensions, {}, "field sizes are inconsistent");
    return rep;  // nothing below is trustworthy
  }

  for (NodeId i = 0; i < V; ++i) {
    for (NodeId j = 0; j < V; ++j) {
      if (i == j) continue;
      if (!(inst.f(i, j) > 0.0) || !std::isfinite(inst.f(i, j))) {
        std::ostringstream os;
        os << "fuel cost " << node_label(inst, i) << "->" << node_label(inst, j)
           << " = " << inst.f(i, j) << " must be positive and finite";
        add(InstanceViolation::kNonPositiveCost, {i, j}, os.str());
      }
    }
  }

  // Directed triangle inequality over all ordered triples of distinct nodes.
  for (NodeId i = 0; i < V; ++i) {
    for (NodeId j = 0; j < V; ++j) {
      if (j == i) continue;
      for (NodeId k = 0; k < V; ++k) {
        if (k == i || k == j) continue;
        if (inst.f(i, j) + inst.f(j, k) < inst.f(i, k) - tol::kPlanFeas) {
          std::ostringstream os;
          os << "triangle inequality violated: f(" << node_label(inst, i) << ","
             << node_label(inst, j) << ") + f(" << node_label(inst, j) << ","
             << node_label(inst, k) << ") = " << inst.f(i, j) + inst.f(j, k)
             << " < f(" << node_label(inst, i) << "," << node_label(inst, k)
             << ") = " << inst.f(i, k);
          add(InstanceViolation::kTriangleInequality, {i, j, k}, os.str());
        }
      }
    }
  }

  for (int m = 0; m < inst.num_uvs; ++m) {
    for (int j = 0; j < inst.num_pois; ++j) {
      if (inst.incentives[m * inst.num_pois + j] < 0.0) {
        add(InstanceViolation::kNegativeIncentive, {m, j},
            "negative incentive for UV " + std::to_string(m) + " at POI " +
                std::to_string(j));
      }
    }
    if (!(inst.fuel_capacity[m] > 0.0)) {
      add(InstanceViolation::kNonPositiveCapacity, {m},
          "fuel capacity of UV " + std::to_string(m) + " must be positive");
    }
    if (!(inst.distance_budget[m] > 0.0)) {
      add(InstanceViolation::kNonPositiveBudget, {m},
          "distance budget of UV " + std::to_string(m) + " must be positive");
    }
  }
  return rep;
}

namespace {

struct ReplayResult {
  std::vector<PlanIssue> issues;
  // Node sequence of the assembled closed walk per UV (starts/ends at r0);
  // empty when the UV has no used edges.
  std::vector<std::vector<NodeId>> walks;
};

// Degree checks, fuel replay (Hierholzer walk assembly from r0, fuel counter
// reset at refueling stations and at r0 departures), budget and linkage.
ReplayResult replay(const Instance& inst, const Plan& plan) {
  ReplayResult out;
  auto add = [&out](PlanViolation kind, int uv, std::vector<int> where,
                    std::string msg) {
    out.issues.push_back({kind, uv, std::move(where), std::move(msg)});
  };

  const int V = inst.V();
  if (plan.num_nodes != V || plan.num_uvs != inst.num_uvs ||
      plan.num_stations != inst.num_stations ||
      plan.edge_use.size() != static_cast<size_t>(inst.num_uvs) * V * V ||
      plan.cumulative_fuel.size() != plan.edge_use.size() ||
      plan.station_use.size() !=
          static_cast<size_t>(inst.num_uvs) * inst.num_stations) {
    add(PlanViolation::kBadDimensions, -1, {}, "plan sizes do not match instance");
    return out;
  }

  // Each POI entered at most once and left at most once across all UVs.
  for (int j = 0; j < inst.num_pois; ++j) {
    const NodeId p = inst.poi_node(j);
    int in = 0, ou = 0;
    for (int m = 0; m < inst.num_uvs; ++m) {
      for (NodeId i = 0; i < V; ++i) {
        if (i == p) continue;
        in += plan.y(m, i, p);
        ou += plan.y(m, p, i);
      }
    }
    if (in > 1 || ou > 1) {
      add(PlanViolation::kPoiRevisit, -1, {p},
          "POI " + node_label(inst, p) + " visited more than once (in=" +
              std::to_string(in) + ", out=" + std::to_string(ou) + ")");
    }
  }

  out.walks.assign(inst.num_uvs, {});
  for (int m = 0; m < inst.num_uvs; ++m) {
    const double F = inst.fuel_capacity[m];

    double total_dist = 0.0;
    std::vector<int> out_deg(V, 0), in_deg(V, 0);
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = 0; j < V; ++j) {
        if (i == j) continue;
        const double xv = plan.x(m, i, j);
        if (plan.y(m, i, j)) {
          ++out_deg[i];
          ++in_deg[j];
          total_dist += inst.f(i, j);
          if (xv < -tol::kPlanFeas || xv > F + tol::kPlanFeas) {
            add(PlanViolation::kFuelLink, m, {i, j},
                "x(" + node_label(inst, i) + "->" + node_label(inst, j) + ") = " +
                    std::to_string(xv) + " outside [0, F=" + std::to_string(F) + "]");
          }
        } else if (std::abs(xv) > tol::kPlanFeas) {
          add(PlanViolation::kFuelLink, m, {i, j},
              "x nonzero on unused edge " + node_label(inst, i) + "->" +
                  node_label(inst, j));
        }
      }
    }

    for (NodeId v = 1; v < V; ++v) {
      if (in_deg[v] != out_deg[v]) {
        add(PlanViolation::kDegreeImbalance, m, {v},
            "UV " + std::to_string(m) + " has in=" + std::to_string(in_deg[v]) +
                " out=" + std::to_string(out_deg[v]) + " at " +
                node_label(inst, v));
      }
    }
    if (in_deg[0] != out_deg[0]) {
      add(PlanViolation::kDegreeImbalance, m, {0},
          "UV " + std::to_string(m) + " base-station degree mismatch");
    }

    if (inst.distance_budget[m] != kUnbounded &&
        total_dist > inst.distance_budget[m] + tol::kPlanFeas) {
      add(PlanViolation::kDistanceBudget, m, {},
          "UV " + std::to_string(m) + " travels " + std::to_string(total_dist) +
              " > budget " + std::to_string(inst.distance_budget[m]));
    }

    // Station-usage flags: any departure from r in R\{r0} requires z = 1.
    for (int r = 1; r < inst.num_stations; ++r) {
      if (out_deg[r] > 0 && !plan.z(m, r)) {
        add(PlanViolation::kStationFlag, m, {r},
            "UV " + std::to_string(m) + " departs " + node_label(inst, r) +
                " with z = 0");
      }
    }

    int total_edges = 0;
    for (int d : out_deg) total_edges += d;
    if (total_edges == 0) continue;  // empty route

    if (!out.issues.empty()) {
      // Degree or dimension problems make the walk assembly meaningless.
      bool fatal = false;
      for (const PlanIssue& v : out.issues) {
        if (v.uv == m && (v.kind == PlanViolation::kDegreeImbalance)) fatal = true;
        if (v.kind == PlanViolation::kBadDimensions ||
            v.kind == PlanViolation::kPoiRevisit) {
          fatal = true;
        }
      }
      if (fatal) continue;
    }

    // Hierholzer: assemble the closed walk through r0, splicing sub-circuits
    // at repeated nodes. Splice points are stations or r0 (POIs have degree
    // <= 1), so the fuel replay below is independent of the splice order.
    std::vector<std::vector<NodeId>> next(V);
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = V - 1; j >= 0; --j) {
        if (i != j && plan.y(m, i, j)) next[i].push_back(j);  // pop -> lowest j first
      }
    }
    if (next[0].empty()) {
      add(PlanViolation::kDisconnected, m, {},
          "UV " + std::to_string(m) + " uses edges but never leaves r0");
      continue;
    }
    std::vector<NodeId> walk, stack{0};
    int used = 0;
    while (!stack.empty()) {
      NodeId u = stack.back();
      if (next[u].empty()) {
        walk.push_back(u);
        stack.pop_back();
      } else {
        NodeId w = next[u].back();
        next[u].pop_back();
        ++used;
        stack.push_back(w);
      }
    }
    std::reverse(walk.begin(), walk.end());
    if (used != total_edges) {
      add(PlanViolation::kDisconnected, m, {},
          "UV " + std::to_string(m) + " has " + std::to_string(total_edges - used) +
              " used edge(s) not reachable on the walk from r0");
      continue;
    }

    // Fuel replay along the walk: the counter resets on arrival at any
    // station in R\{r0}; legs between resets must fit the tank. Departures
    // from r0 also start at zero (mid-walk r0 visits only occur under the
    // aggregate depot variant, where Eq.-(11)-style resets apply as well).
    double fuel = 0.0;
    for (size_t t = 0; t + 1 < walk.size(); ++t) {
      const NodeId a = walk[t], b = walk[t + 1];
      if (inst.is_station(a)) fuel = 0.0;
      fuel += inst.f(a, b);
      if (fuel > F + tol::kPlanFeas) {
        add(PlanViolation::kFuelCapacity, m, {a, b},
            "UV " + std::to_string(m) + " reaches " + node_label(inst, b) +
                " with " + std::to_string(fuel) + " fuel used since the last " +
                "refuel, capacity " + std::to_string(F));
        break;
      }
    }
    out.walks[m] = std::move(walk);
  }
  return out;
}

}  // namespace

std::vector<PlanIssue> check_plan(const Instance& inst, const Plan& plan) {
  return replay(inst, plan).issues;
}

std::vector<std::vector<NodeId>> plan_visit_orders(const Instance& inst,
                                                   const Plan& plan) {
  ReplayResult rr = replay(inst, plan);
  if (!rr.issues.empty()) {
    const PlanIssue& first = rr.issues.front();
    throw PlanInfeasibleError(first, "infeasible plan: " + first.message);
  }
  std::vector<std::vector<NodeId>> orders(inst.num_uvs);
  for (int m = 0; m < inst.num_uvs; ++m) {
    for (NodeId v : rr.walks[m]) {
      if (inst.is_poi(v)) orders[m].push_back(v);
    }
  }
  return orders;
}

double first_stage_incentive(const Instance& inst, const Plan& plan, int uv) {
  double total = 0.0;
  const int V = inst.V();
  for (NodeId i = 0; i < V; ++i) {
    for (NodeId j = 0; j < V; ++j) {
      if (i == j || !inst.is_poi(j)) continue;
      if (plan.y(uv, i, j)) total += inst.incentive(uv, j);
    }
  }
  return total;
}

double evaluate_plan(const Instance& inst, const Plan& plan, const Scenario& s) {
  if (static_cast<int>(s.availability.size()) != inst.num_uvs) {
    throw std::invalid_argument("scenario availability size mismatch");
  }
  const std::vector<PlanIssue> issues = check_plan(inst, plan);
  if (!issues.empty()) {
    throw PlanInfeasibleError(issues.front(),
                              "infeasible plan: " + issues.front().message);
  }
  double total = 0.0;
  for (int m = 0; m < inst.num_uvs; ++m) {
    if (s.availability[m]) total += first_stage_incentive(inst, plan, m);
  }
  return total;
}

double expected_objective(const Instance& inst, const Plan& plan,
                          const ScenarioSet& scen) {
  validate_scenarios(scen);
  double total = 0.0;
  for (const Scenario& s : scen.scenarios) {
    total += s.probability * evaluate_plan(inst, plan, s);
  }
  return total;
}

std::vector<double> availability_scale(const ScenarioSet& scen) {
  validate_scenarios(scen);
  std::vector<double> a(scen.num_uvs, 0.0);
  for (const Scenario& s : scen.scenarios) {
    for (int m = 0; m < scen.num_uvs; ++m) {
      if (s.availability[m]) a[m] += s.probability;
    }
  }
  return a;
}

}  // namespace sva
