#pragma once

#include <map>
#include <string>
#include <vector>

#include "sva/mip.hpp"
#include "sva/model.hpp"

namespace sva {

struct FormulationOptions {
  // Replace the big-q indicator rows and binary z by the tighter
  // station-indicator rows (z relaxed to [0,1]) and the three strengthened
  // fuel families using t_i = min_r f(i,r), s_i = min_r f(r,i).
  bool strengthen = true;
  // Depot rows per UV (exactly one departure and one return at r0) instead
  // of the aggregate 2-row form summing to |M|.
  bool per_uv_depot = true;
};

enum class SecondStageKind { kBinary, kRelaxed };

// Dense bijection between model columns and semantic variables. Column
// layout, in order: y(m,i,j) blocks (UV major, edge id minor), x(m,i,j)
// blocks, z(m,r) for r in 1..S-1, then any theta columns, then per-scenario
// v(w,m,i,j) blocks. Edge ids enumerate ordered pairs row major, skipping
// the diagonal: id(i,j) = i*(V-1) + j - (j > i).
struct VariableIndex {
  int num_nodes = 0;
  int num_stations = 0;
  int num_uvs = 0;
  int num_scenarios = 0;  // DEP only
  int num_theta = 0;      // decomposition master only

  int num_edges() const { return num_nodes * (num_nodes - 1); }
  int edge_id(NodeId i, NodeId j) const {
    return i * (num_nodes - 1) + j - (j > i ? 1 : 0);
  }
  std::pair<NodeId, NodeId> edge_of(int eid) const {
    const NodeId i = eid / (num_nodes - 1);
    NodeId j = eid % (num_nodes - 1);
    if (j >= i) ++j;
    return {i, j};
  }
  int y(int uv, NodeId i, NodeId j) const {
    return uv * num_edges() + edge_id(i, j);
  }
  int x(int uv, NodeId i, NodeId j) const {
    return (num_uvs + uv) * num_edges() + edge_id(i, j);
  }
  int z(int uv, int r) const {
    return 2 * num_uvs * num_edges() + uv * (num_stations - 1) + (r - 1);
  }
  int theta(int t = 0) const { return first_theta_col + t; }
  int v(int scenario, int uv, NodeId i, NodeId j) const {
    return first_v_col + (scenario * num_uvs + uv) * num_edges() + edge_id(i, j);
  }
  int num_first_stage_cols() const {
    return 2 * num_uvs * num_edges() + num_uvs * (num_stations - 1);
  }

  int first_theta_col = -1;
  int first_v_col = -1;
};

struct BuiltModel {
  MipProblem mip;
  VariableIndex vidx;
  // Row counts per constraint family, for diagnostics and tests.
  std::map<std::string, int> row_families;
};

// First-stage model: flow conservation, depot rows, station indicators, POI
// visit limits, fuel flow and station-departure fuel definitions, fuel
// capacity (or the strengthened families), distance budgets. The exponential
// connectivity family is separated lazily via separate_sec, never built in.
// Throws std::invalid_argument when the instance fails validation.
BuiltModel build_first_stage(const Instance& inst,
                             const FormulationOptions& options = {});

// Deterministic equivalent: first stage plus, per scenario, the recourse
// rows over v(w,m,i,j) (binary or box-[0,1]) and the probability-weighted
// recourse objective.
BuiltModel build_dep(const Instance& inst, const ScenarioSet& scen,
                     SecondStageKind second_stage,
                     const FormulationOptions& options = {});

// Appends `count` recourse-approximation columns (objective coefficient
// `weight[t]`, bounds [lb, 0]) and records them in the index.
void add_theta_columns(BuiltModel& model, const std::vector<double>& weights,
                       double lower_bound);

// One violated connectivity constraint: y(beta+(S))^uv >= z(uv, station)
// with S a vertex set excluding r0 that contains `station`.
struct SecCut {
  std::vector<NodeId> vertex_set;
  int uv = -1;
  NodeId station = -1;
};

// Exact separation for integral candidates: builds the support digraph of
// the UV's selected edges, finds its strongly connected components, and for
// every used station (z = 1) whose successor closure misses r0 emits the cut
// with S = that closure. Returns empty iff no constraint of the family is
// violated. Fractional y is rejected (std::invalid_argument).
std::vector<SecCut> separate_sec(const Instance& inst,
                                 const std::vector<double>& y_uv,  // V*V
                                 const std::vector<double>& z_uv,  // S, [0] unused
                                 int uv);

LpRow sec_cut_row(const VariableIndex& vidx, const SecCut& cut);

// Reads a first-stage solution out of a MIP solution vector.
Plan extract_plan(const Instance& inst, const VariableIndex& vidx,
                  const std::vector<double>& solution);

}  // namespace sva
