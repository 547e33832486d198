#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sva {

// Nodes of the mission graph live in one id space. The refueling stations
// come first with the base station at id 0, the POIs follow:
//   r0, r1, ..., r_{S-1},  p_1, ..., p_n   ->   0 .. S-1, S .. S+n-1
// Edges are all ordered pairs (i, j), i != j; there are no self loops.
using NodeId = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double euclid(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// A mission instance: POIs with per-UV incentives, refueling stations, a base
// station r0 where every UV starts and ends (no recharge at r0), a full
// ordered-pair fuel cost matrix, per-UV fuel capacities and distance budgets.
struct Instance {
  int num_stations = 0;  // includes the base station r0
  int num_pois = 0;
  int num_uvs = 0;

  std::vector<std::string> node_names;  // size V(), canonical node order
  std::vector<Point> coords;            // size V()
  std::vector<double> fuel_cost;        // V()*V() row major, diagonal unused
  std::vector<double> incentives;       // num_uvs * num_pois, e(m, j)
  std::vector<double> fuel_capacity;    // per UV, F_m > 0
  std::vector<double> distance_budget;  // per UV, kUnbounded means no budget

  int V() const { return num_stations + num_pois; }
  int num_edges() const { return V() * (V() - 1); }
  bool is_station(NodeId v) const { return v >= 0 && v < num_stations; }
  bool is_poi(NodeId v) const { return v >= num_stations && v < V(); }
  NodeId base() const { return 0; }
  NodeId poi_node(int j) const { return num_stations + j; }
  int poi_index(NodeId v) const { return v - num_stations; }

  double f(NodeId i, NodeId j) const { return fuel_cost[i * V() + j]; }
  void set_f(NodeId i, NodeId j, double c) { fuel_cost[i * V() + j] = c; }
  double incentive(int uv, NodeId poi) const {
    return incentives[uv * num_pois + poi_index(poi)];
  }
  double total_incentive() const;

  // Large constant of the unstrengthened indicator rows, set to |P|.
  int q() const { return num_pois; }
};

// Finite probability space over UV availability: each scenario fixes
// alpha_m in {0,1} per UV and carries a probability; probabilities sum to 1.
struct Scenario {
  std::vector<uint8_t> availability;  // per UV, 0 or 1
  double probability = 0.0;
};

struct ScenarioSet {
  int num_uvs = 0;
  std::vector<Scenario> scenarios;
};

// Throws std::invalid_argument when the scenario set breaks its invariants
// (empty, probabilities off by more than tol::kProbSum, alpha not 0/1).
void validate_scenarios(const ScenarioSet& scen);

// First-stage decisions: per-UV edge selection y, cumulative fuel x attached
// to traversed edges (distance since the last refuel, measured on arrival),
// and station usage flags z for r in R\{r0}.
struct Plan {
  int num_uvs = 0;
  int num_stations = 0;
  int num_nodes = 0;

  std::vector<uint8_t> edge_use;        // y, num_uvs*V*V row major, diag 0
  std::vector<double> cumulative_fuel;  // x, same layout
  std::vector<uint8_t> station_use;     // z, num_uvs*num_stations, [m][0] unused

  double objective_lb = -kUnbounded;
  double objective_ub = kUnbounded;

  int idx(int uv, NodeId i, NodeId j) const {
    return (uv * num_nodes + i) * num_nodes + j;
  }
  uint8_t y(int uv, NodeId i, NodeId j) const { return edge_use[idx(uv, i, j)]; }
  double x(int uv, NodeId i, NodeId j) const { return cumulative_fuel[idx(uv, i, j)]; }
  uint8_t z(int uv, int r) const { return station_use[uv * num_stations + r]; }
  void set_y(int uv, NodeId i, NodeId j, uint8_t v) { edge_use[idx(uv, i, j)] = v; }
  void set_x(int uv, NodeId i, NodeId j, double v) { cumulative_fuel[idx(uv, i, j)] = v; }
  void set_z(int uv, int r, uint8_t v) { station_use[uv * num_stations + r] = v; }

  bool operator==(const Plan&) const = default;
};

Plan make_empty_plan(const Instance& inst);

// ---------------------------------------------------------------------------
// Instance validation

enum class InstanceViolation {
  kBadDimensions,
  kTriangleInequality,   // where = {i, j, k}: f(i,j) + f(j,k) < f(i,k)
  kNonPositiveCost,      // where = {i, j}
  kNegativeIncentive,    // where = {uv, poi_index}
  kNonPositiveCapacity,  // where = {uv}
  kNonPositiveBudget,    // where = {uv}
  kNoPois,
  kNoUvs,
  kNoBase,
};

struct InstanceIssue {
  InstanceViolation kind;
  std::vector<int> where;
  std::string message;
};

struct ValidationReport {
  std::vector<InstanceIssue> issues;
  bool valid() const { return issues.empty(); }
};

// Diagnostics only; reports every violated invariant instead of throwing.
ValidationReport validate_instance(const Instance& inst);

// ---------------------------------------------------------------------------
// Plan feasibility and evaluation

enum class PlanViolation {
  kBadDimensions,
  kDegreeImbalance,   // in-degree != out-degree at a non-base node
  kPoiRevisit,        // a POI entered or left more than once across UVs
  kFuelLink,          // x > F*y (or x nonzero on an unused edge)
  kFuelCapacity,      // replayed fuel between refuels exceeds F_m
  kDistanceBudget,    // total traversed distance exceeds delta_m
  kDisconnected,      // used edges not reachable on the walk from r0
  kStationFlag,       // station departed but z = 0
};

struct PlanIssue {
  PlanViolation kind;
  int uv = -1;
  std::vector<int> where;
  std::string message;
};

class PlanInfeasibleError : public std::runtime_error {
 public:
  PlanInfeasibleError(PlanIssue issue, const std::string& what)
      : std::runtime_error(what), issue_(std::move(issue)) {}
  const PlanIssue& issue() const { return issue_; }

 private:
  PlanIssue issue_;
};

// Replays every UV route from r0 (consuming all used edges, resetting the
// fuel counter at refueling stations) and checks the static plan invariants.
// Empty result means the plan is feasible within tol::kPlanFeas.
std::vector<PlanIssue> check_plan(const Instance& inst, const Plan& plan);

// One UV's POI visit order obtained from the route replay. Used by the
// simulator and the exporters; throws PlanInfeasibleError on a broken plan.
std::vector<std::vector<NodeId>> plan_visit_orders(const Instance& inst,
                                                   const Plan& plan);

// Incentive collected by UV `uv` in the first stage: sum of e(uv, j) over
// selected edges entering POI j.
double first_stage_incentive(const Instance& inst, const Plan& plan, int uv);

// Realized incentive under one availability scenario:
//   sum_m alpha_m * first_stage_incentive(m).
// Throws PlanInfeasibleError naming the violated constraint.
double evaluate_plan(const Instance& inst, const Plan& plan, const Scenario& s);

// Probability-weighted sum of evaluate_plan over all scenarios.
double expected_objective(const Instance& inst, const Plan& plan,
                          const ScenarioSet& scen);

// a_m = sum_w rho(w) * alpha_m(w), each in [0, 1].
std::vector<double> availability_scale(const ScenarioSet& scen);

}  // namespace sva
