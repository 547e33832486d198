#include "sva/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sva/scc.hpp"
#include "sva/tolerances.hpp"

namespace sva {

namespace {

std::string edge_tag(const Instance& inst, int m, NodeId i, NodeId j) {
  return "[" + std::to_string(m) + "|" + inst.node_names[i] + "->" +
         inst.node_names[j] + "]";
}

// Cheapest hop from node i to any station (t_i) or from any station to i
// (s_i); r0 counts, a mission leg may end at the base.
double min_to_station(const Instance& inst, NodeId i) {
  double best = kUnbounded;
  for (int r = 0; r < inst.num_stations; ++r) {
    if (r != i) best = std::min(best, inst.f(i, r));
  }
  return best;
}

double min_from_station(const Instance& inst, NodeId i) {
  double best = kUnbounded;
  for (int r = 0; r < inst.num_stations; ++r) {
    if (r != i) best = std::min(best, inst.f(r, i));
  }
  return best;
}

}  // namespace

BuiltModel build_first_stage(const Instance& inst,
                             const FormulationOptions& options) {
  const ValidationReport rep = validate_instance(inst);
  if (!rep.valid()) {
    throw std::invalid_argument("instance rejected: " + rep.issues.front().message);
  }

  BuiltModel model;
  VariableIndex& vx = model.vidx;
  vx.num_nodes = inst.V();
  vx.num_stations = inst.num_stations;
  vx.num_uvs = inst.num_uvs;

  LinearProgram& lp = model.mip.lp;
  lp.sense = Sense::kMaximize;
  const int V = inst.V(), M = inst.num_uvs, S = inst.num_stations;

  // Columns: y blocks, x blocks, z block (see VariableIndex).
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < V; ++i) {
      for (int j = 0; j < V; ++j) {
        if (i == j) continue;
        const double obj = inst.is_poi(j) ? inst.incentive(m, j) : 0.0;
        lp.add_col(obj, 0.0, 1.0, "y" + edge_tag(inst, m, i, j));
      }
    }
  }
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < V; ++i) {
      for (int j = 0; j < V; ++j) {
        if (i == j) continue;
        lp.add_col(0.0, 0.0, inst.fuel_capacity[m], "x" + edge_tag(inst, m, i, j));
      }
    }
  }
  for (int m = 0; m < M; ++m) {
    for (int r = 1; r < S; ++r) {
      lp.add_col(0.0, 0.0, 1.0,
                 "z[" + std::to_string(m) + "|" + inst.node_names[r] + "]");
    }
  }
  model.mip.integral.assign(lp.num_cols(), 0);
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < V; ++i) {
      for (int j = 0; j < V; ++j) {
        if (i != j) model.mip.integral[vx.y(m, i, j)] = 1;
      }
    }
    if (!options.strengthen) {
      for (int r = 1; r < S; ++r) model.mip.integral[vx.z(m, r)] = 1;
    }
  }

  auto count = [&model](const std::string& family) { ++model.row_families[family]; };

  // Flow conservation at every node except r0: out-degree equals in-degree.
  for (int m = 0; m < M; ++m) {
    for (NodeId v = 1; v < V; ++v) {
      LpRow row;
      for (NodeId i = 0; i < V; ++i) {
        if (i == v) continue;
        row.entries.push_back({vx.y(m, v, i), 1.0});
        row.entries.push_back({vx.y(m, i, v), -1.0});
      }
      row.rel = RowRel::kEq;
      row.rhs = 0.0;
      lp.add_row(std::move(row), "flow[" + std::to_string(m) + "|" +
                                     inst.node_names[v] + "]");
      count("flow");
    }
  }

  // Depot rows: every UV departs r0 and returns to it.
  if (options.per_uv_depot) {
    for (int m = 0; m < M; ++m) {
      LpRow out, in;
      for (NodeId i = 1; i < V; ++i) {
        out.entries.push_back({vx.y(m, 0, i), 1.0});
        in.entries.push_back({vx.y(m, i, 0), 1.0});
      }
      out.rel = in.rel = RowRel::kEq;
      out.rhs = in.rhs = 1.0;
      lp.add_row(std::move(out), "depot_out[" + std::to_string(m) + "]");
      lp.add_row(std::move(in), "depot_in[" + std::to_string(m) + "]");
      count("depot_out");
      count("depot_in");
    }
  } else {
    LpRow out, in;
    for (int m = 0; m < M; ++m) {
      for (NodeId i = 1; i < V; ++i) {
        out.entries.push_back({vx.y(m, 0, i), 1.0});
        in.entries.push_back({vx.y(m, i, 0), 1.0});
      }
    }
    out.rel = in.rel = RowRel::kEq;
    out.rhs = in.rhs = static_cast<double>(M);
    lp.add_row(std::move(out), "depot_out[all]");
    lp.add_row(std::move(in), "depot_in[all]");
    count("depot_out");
    count("depot_in");
  }

  // Station usage indicators.
  for (int m = 0; m < M; ++m) {
    for (int r = 1; r < S; ++r) {
      if (options.strengthen) {
        for (NodeId i = 0; i < V; ++i) {
          if (i == r) continue;
          LpRow row;
          row.entries.push_back({vx.y(m, r, i), 1.0});
          row.entries.push_back({vx.z(m, r), -1.0});
          row.rel = RowRel::kLe;
          row.rhs = 0.0;
          lp.add_row(std::move(row), "station_ind" + edge_tag(inst, m, r, i));
          count("station_indicator");
        }
      } else {
        LpRow row;
        for (NodeId i = 0; i < V; ++i) {
          if (i != r) row.entries.push_back({vx.y(m, r, i), 1.0});
        }
        row.entries.push_back({vx.z(m, r), -static_cast<double>(inst.q())});
        row.rel = RowRel::kLe;
        row.rhs = 0.0;
        lp.add_row(std::move(row), "station_bigq[" + std::to_string(m) + "|" +
                                       inst.node_names[r] + "]");
        count("station_bigq");
      }
    }
  }

  // Each POI entered at most once and left at most once, across all UVs.
  for (int j = 0; j < inst.num_pois; ++j) {
    const NodeId p = inst.poi_node(j);
    LpRow in, out;
    for (int m = 0; m < M; ++m) {
      for (NodeId i = 0; i < V; ++i) {
        if (i == p) continue;
        in.entries.push_back({vx.y(m, i, p), 1.0});
        out.entries.push_back({vx.y(m, p, i), 1.0});
      }
    }
    in.rel = out.rel = RowRel::kLe;
    in.rhs = out.rhs = 1.0;
    lp.add_row(std::move(in), "visit_in[" + inst.node_names[p] + "]");
    lp.add_row(std::move(out), "visit_out[" + inst.node_names[p] + "]");
    count("visit_in");
    count("visit_out");
  }

  // Cumulative-fuel flow at POIs: fuel on the outgoing edge equals fuel on
  // the incoming edge plus the outgoing hop cost.
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < inst.num_pois; ++j) {
      const NodeId p = inst.poi_node(j);
      LpRow row;
      for (NodeId i = 0; i < V; ++i) {
        if (i == p) continue;
        row.entries.push_back({vx.x(m, p, i), 1.0});
        row.entries.push_back({vx.x(m, i, p), -1.0});
        row.entries.push_back({vx.y(m, p, i), -inst.f(p, i)});
      }
      row.rel = RowRel::kEq;
      row.rhs = 0.0;
      lp.add_row(std::move(row), "fuel_flow[" + std::to_string(m) + "|" +
                                     inst.node_names[p] + "]");
      count("fuel_flow");
    }
  }

  // Fuel resets when leaving any station (including r0).
  for (int m = 0; m < M; ++m) {
    for (int r = 0; r < S; ++r) {
      for (NodeId i = 0; i < V; ++i) {
        if (i == r) continue;
        LpRow row;
        row.entries.push_back({vx.x(m, r, i), 1.0});
        row.entries.push_back({vx.y(m, r, i), -inst.f(r, i)});
        row.rel = RowRel::kEq;
        row.rhs = 0.0;
        lp.add_row(std::move(row), "station_depart" + edge_tag(inst, m, r, i));
        count("station_depart");
      }
    }
  }

  // Fuel-capacity linking.
  for (int m = 0; m < M; ++m) {
    const double F = inst.fuel_capacity[m];
    if (options.strengthen) {
      for (int j = 0; j < inst.num_pois; ++j) {
        const NodeId p = inst.poi_node(j);
        const double tj = min_to_station(inst, p);
        for (NodeId i = 0; i < V; ++i) {
          if (i == p) continue;
          LpRow row;
          row.entries.push_back({vx.x(m, i, p), 1.0});
          row.entries.push_back({vx.y(m, i, p), -(F - tj)});
          row.rel = RowRel::kLe;
          row.rhs = 0.0;
          lp.add_row(std::move(row), "cap_poi" + edge_tag(inst, m, i, p));
          count("cap_poi");
        }
      }
      for (int r = 0; r < S; ++r) {
        for (NodeId i = 0; i < V; ++i) {
          if (i == r) continue;
          LpRow row;
          row.entries.push_back({vx.x(m, i, r), 1.0});
          row.entries.push_back({vx.y(m, i, r), -F});
          row.rel = RowRel::kLe;
          row.rhs = 0.0;
          lp.add_row(std::move(row), "cap_station" + edge_tag(inst, m, i, r));
          count("cap_station");
        }
      }
      for (int j = 0; j < inst.num_pois; ++j) {
        const NodeId p = inst.poi_node(j);
        const double sp = min_from_station(inst, p);
        for (NodeId i = 0; i < V; ++i) {
          if (i == p) continue;
          LpRow row;
          row.entries.push_back({vx.x(m, p, i), -1.0});
          row.entries.push_back({vx.y(m, p, i), sp + inst.f(p, i)});
          row.rel = RowRel::kLe;
          row.rhs = 0.0;
          lp.add_row(std::move(row), "fuel_lb" + edge_tag(inst, m, p, i));
          count("fuel_lb");
        }
      }
    } else {
      for (NodeId i = 0; i < V; ++i) {
        for (NodeId j = 0; j < V; ++j) {
          if (i == j) continue;
          LpRow row;
          row.entries.push_back({vx.x(m, i, j), 1.0});
          row.entries.push_back({vx.y(m, i, j), -F});
          row.rel = RowRel::kLe;
          row.rhs = 0.0;
          lp.add_row(std::move(row), "cap" + edge_tag(inst, m, i, j));
          count("cap");
        }
      }
    }
  }

  // Per-UV distance budget.
  for (int m = 0; m < M; ++m) {
    if (inst.distance_budget[m] == kUnbounded) continue;
    LpRow row;
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = 0; j < V; ++j) {
        if (i != j) row.entries.push_back({vx.y(m, i, j), inst.f(i, j)});
      }
    }
    row.rel = RowRel::kLe;
    row.rhs = inst.distance_budget[m];
    lp.add_row(std::move(row), "budget[" + std::to_string(m) + "]");
    count("budget");
  }

  return model;
}

void add_theta_columns(BuiltModel& model, const std::vector<double>& weights,
                       double lower_bound) {
  model.vidx.first_theta_col = model.mip.lp.num_cols();
  model.vidx.num_theta = static_cast<int>(weights.size());
  for (size_t t = 0; t < weights.size(); ++t) {
    model.mip.lp.add_col(weights[t], lower_bound, 0.0,
                         "theta[" + std::to_string(t) + "]");
    model.mip.integral.push_back(0);
  }
}

BuiltModel build_dep(const Instance& inst, const ScenarioSet& scen,
                     SecondStageKind second_stage,
                     const FormulationOptions& options) {
  validate_scenarios(scen);
  if (scen.num_uvs != inst.num_uvs) {
    throw std::invalid_argument("scenario set does not match instance UV count");
  }
  BuiltModel model = build_first_stage(inst, options);
  VariableIndex& vx = model.vidx;
  LinearProgram& lp = model.mip.lp;
  const int V = inst.V(), M = inst.num_uvs, S = inst.num_stations;
  const int N = static_cast<int>(scen.scenarios.size());

  vx.first_v_col = lp.num_cols();
  vx.num_scenarios = N;
  for (int w = 0; w < N; ++w) {
    const double rho = scen.scenarios[w].probability;
    for (int m = 0; m < M; ++m) {
      for (NodeId i = 0; i < V; ++i) {
        for (NodeId j = 0; j < V; ++j) {
          if (i == j) continue;
          const double obj =
              inst.is_poi(j) ? -rho * inst.incentive(m, j) : 0.0;
          lp.add_col(obj, 0.0, 1.0,
                     "v[" + std::to_string(w) + "]" + edge_tag(inst, m, i, j));
          model.mip.integral.push_back(second_stage == SecondStageKind::kBinary);
        }
      }
    }
  }

  auto count = [&model](const std::string& family) { ++model.row_families[family]; };
  for (int w = 0; w < N; ++w) {
    const Scenario& sc = scen.scenarios[w];
    const std::string tag = "(" + std::to_string(w) + ")";
    for (int m = 0; m < M; ++m) {
      const double alpha = sc.availability[m];
      for (int j = 0; j < inst.num_pois; ++j) {
        const NodeId p = inst.poi_node(j);
        LpRow row;
        for (NodeId i = 0; i < V; ++i) {
          if (i == p) continue;
          row.entries.push_back({vx.v(w, m, p, i), inst.f(p, i)});
          row.entries.push_back({vx.x(m, p, i), -1.0});
          row.entries.push_back({vx.x(m, i, p), 1.0});
          if (alpha != 0.0) {
            row.entries.push_back({vx.y(m, p, i), alpha * inst.f(p, i)});
          }
        }
        row.rel = RowRel::kEq;
        row.rhs = 0.0;
        lp.add_row(std::move(row), "ss_flow" + tag + "[" + std::to_string(m) +
                                       "|" + inst.node_names[p] + "]");
        count("ss_flow");
      }
      for (NodeId i = 0; i < V; ++i) {
        for (NodeId j = 0; j < V; ++j) {
          if (i == j) continue;
          LpRow row;
          row.entries.push_back({vx.v(w, m, i, j), 1.0});
          row.entries.push_back({vx.y(m, i, j), -1.0});
          row.rel = RowRel::kLe;
          row.rhs = 0.0;
          lp.add_row(std::move(row), "ss_link" + tag + edge_tag(inst, m, i, j));
          count("ss_link");
        }
      }
      for (int r = 0; r < S; ++r) {
        for (NodeId i = 0; i < V; ++i) {
          if (i == r) continue;
          LpRow row;
          row.entries.push_back({vx.v(w, m, r, i), inst.f(r, i)});
          row.entries.push_back({vx.x(m, r, i), -1.0});
          if (alpha != 0.0) {
            row.entries.push_back({vx.y(m, r, i), alpha * inst.f(r, i)});
          }
          row.rel = RowRel::kEq;
          row.rhs = 0.0;
          lp.add_row(std::move(row),
                     "ss_depart" + tag + edge_tag(inst, m, r, i));
          count("ss_depart");
        }
      }
    }
  }
  return model;
}

std::vector<SecCut> separate_sec(const Instance& inst,
                                 const std::vector<double>& y_uv,
                                 const std::vector<double>& z_uv,
                                 int uv) {
  const int V = inst.V(), S = inst.num_stations;
  if (static_cast<int>(y_uv.size()) != V * V ||
      static_cast<int>(z_uv.size()) != S) {
    throw std::invalid_argument("separate_sec: slice size mismatch");
  }
  std::vector<std::vector<int>> adj(V);
  for (NodeId i = 0; i < V; ++i) {
    for (NodeId j = 0; j < V; ++j) {
      if (i == j) continue;
      const double yv = y_uv[i * V + j];
      if (std::abs(yv - std::round(yv)) > tol::kIntegrality) {
        throw std::invalid_argument(
            "separate_sec: separation is defined at integral candidates");
      }
      if (yv > 0.5) adj[i].push_back(j);
    }
  }

  const std::vector<std::vector<int>> comps = strongly_connected_components(adj);
  std::vector<int> comp_of(V, -1);
  for (size_t c = 0; c < comps.size(); ++c) {
    for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
  }
  const int C = static_cast<int>(comps.size());
  std::vector<std::vector<int>> cadj(C);
  for (NodeId i = 0; i < V; ++i) {
    for (int j : adj[i]) {
      if (comp_of[i] != comp_of[j]) cadj[comp_of[i]].push_back(comp_of[j]);
    }
  }

  // Successor closure per component, memoized; the closure of a used station
  // is the smallest candidate set S with no selected edge leaving it.
  std::vector<std::vector<int>> closure_nodes(C);
  std::vector<char> closure_done(C, 0), closure_has_r0(C, 0);
  auto compute_closure = [&](int c0) {
    if (closure_done[c0]) return;
    std::vector<char> seen(C, 0);
    std::vector<int> stack{c0}, nodes;
    seen[c0] = 1;
    bool has_r0 = false;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int v : comps[c]) {
        nodes.push_back(v);
        if (v == 0) has_r0 = true;
      }
      for (int d : cadj[c]) {
        if (!seen[d]) {
          seen[d] = 1;
          stack.push_back(d);
        }
      }
    }
    std::sort(nodes.begin(), nodes.end());
    closure_nodes[c0] = std::move(nodes);
    closure_has_r0[c0] = has_r0;
    closure_done[c0] = 1;
  };

  std::vector<SecCut> cuts;
  for (int r = 1; r < S; ++r) {
    if (z_uv[r] < 0.5) continue;
    const int c = comp_of[r];
    compute_closure(c);
    if (closure_has_r0[c]) continue;
    cuts.push_back({closure_nodes[c], uv, r});
  }
  return cuts;
}

LpRow sec_cut_row(const VariableIndex& vidx, const SecCut& cut) {
  const int V = vidx.num_nodes;
  std::vector<char> in_set(V, 0);
  for (NodeId v : cut.vertex_set) in_set[v] = 1;
  LpRow row;
  for (NodeId i = 0; i < V; ++i) {
    if (!in_set[i]) continue;
    for (NodeId j = 0; j < V; ++j) {
      if (i == j || in_set[j]) continue;
      row.entries.push_back({vidx.y(cut.uv, i, j), 1.0});
    }
  }
  row.entries.push_back({vidx.z(cut.uv, cut.station), -1.0});
  row.rel = RowRel::kGe;
  row.rhs = 0.0;
  return row;
}

Plan extract_plan(const Instance& inst, const VariableIndex& vidx,
                  const std::vector<double>& solution) {
  Plan plan = make_empty_plan(inst);
  const int V = inst.V();
  for (int m = 0; m < inst.num_uvs; ++m) {
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = 0; j < V; ++j) {
        if (i == j) continue;
        const bool used = solution[vidx.y(m, i, j)] > 0.5;
        plan.set_y(m, i, j, used);
        plan.set_x(m, i, j,
                   used ? std::max(0.0, solution[vidx.x(m, i, j)]) : 0.0);
      }
    }
    for (int r = 1; r < inst.num_stations; ++r) {
      plan.set_z(m, r, solution[vidx.z(m, r)] > 0.5);
    }
  }
  return plan;
}

}  // namespace sva
