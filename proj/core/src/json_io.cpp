#include "sva/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sva {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const char* what,
                 std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) {
    throw std::invalid_argument(std::string(what) + ": expected an object");
  }
  std::set<std::string> allowed;
  for (const char* k : required) allowed.insert(k);
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw std::invalid_argument(std::string(what) + ": unknown field '" +
                                  key + "'");
    }
  }
  for (const char* k : required) {
    if (!j.contains(k)) {
      throw std::invalid_argument(std::string(what) + ": missing field '" +
                                  std::string(k) + "'");
    }
  }
}

void check_version(const json& j, const char* what) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::invalid_argument(std::string(what) +
                                ": unsupported schema_version");
  }
}

json node_to_json(const Instance& inst, NodeId v) {
  return json{{"id", inst.node_names[v]},
              {"x", inst.coords[v].x},
              {"y", inst.coords[v].y}};
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["num_uvs"] = inst.num_uvs;
  json stations = json::array(), pois = json::array();
  for (int r = 0; r < inst.num_stations; ++r) stations.push_back(node_to_json(inst, r));
  for (int p = 0; p < inst.num_pois; ++p) {
    pois.push_back(node_to_json(inst, inst.poi_node(p)));
  }
  j["stations"] = std::move(stations);
  j["pois"] = std::move(pois);

  const int V = inst.V();
  json cost = json::array();
  for (NodeId i = 0; i < V; ++i) {
    json row = json::array();
    for (NodeId j2 = 0; j2 < V; ++j2) row.push_back(inst.fuel_cost[i * V + j2]);
    cost.push_back(std::move(row));
  }
  j["fuel_cost"] = std::move(cost);

  json inc = json::array();
  for (int m = 0; m < inst.num_uvs; ++m) {
    json row = json::array();
    for (int p = 0; p < inst.num_pois; ++p) {
      row.push_back(inst.incentives[m * inst.num_pois + p]);
    }
    inc.push_back(std::move(row));
  }
  j["incentives"] = std::move(inc);
  j["fuel_capacity"] = inst.fuel_capacity;
  json budget = json::array();
  for (double d : inst.distance_budget) {
    if (d == kUnbounded) {
      budget.push_back(nullptr);
    } else {
      budget.push_back(d);
    }
  }
  j["distance_budget"] = std::move(budget);
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const json j = json::parse(text);
  expect_keys(j, "instance",
              {"schema_version", "num_uvs", "stations", "pois", "fuel_cost",
               "incentives", "fuel_capacity", "distance_budget"});
  check_version(j, "instance");

  Instance inst;
  inst.num_uvs = j.at("num_uvs").get<int>();
  inst.num_stations = static_cast<int>(j.at("stations").size());
  inst.num_pois = static_cast<int>(j.at("pois").size());
  auto read_nodes = [&inst](const json& arr) {
    for (const json& n : arr) {
      expect_keys(n, "node", {"id", "x", "y"});
      inst.node_names.push_back(n.at("id").get<std::string>());
      inst.coords.push_back({n.at("x").get<double>(), n.at("y").get<double>()});
    }
  };
  read_nodes(j.at("stations"));
  read_nodes(j.at("pois"));

  const int V = inst.V();
  const json& cost = j.at("fuel_cost");
  if (static_cast<int>(cost.size()) != V) {
    throw std::invalid_argument("instance: fuel_cost must have V rows");
  }
  inst.fuel_cost.assign(static_cast<size_t>(V) * V, 0.0);
  for (NodeId i = 0; i < V; ++i) {
    if (static_cast<int>(cost[i].size()) != V) {
      throw std::invalid_argument("instance: fuel_cost row size mismatch");
    }
    for (NodeId j2 = 0; j2 < V; ++j2) {
      inst.fuel_cost[i * V + j2] = cost[i][j2].get<double>();
    }
  }

  const json& inc = j.at("incentives");
  if (static_cast<int>(inc.size()) != inst.num_uvs) {
    throw std::invalid_argument("instance: incentives must have one row per UV");
  }
  for (const json& row : inc) {
    if (static_cast<int>(row.size()) != inst.num_pois) {
      throw std::invalid_argument("instance: incentive row size mismatch");
    }
    for (const json& v : row) inst.incentives.push_back(v.get<double>());
  }
  inst.fuel_capacity = j.at("fuel_capacity").get<std::vector<double>>();
  for (const json& v : j.at("distance_budget")) {
    inst.distance_budget.push_back(v.is_null() ? kUnbounded : v.get<double>());
  }
  if (static_cast<int>(inst.fuel_capacity.size()) != inst.num_uvs ||
      static_cast<int>(inst.distance_budget.size()) != inst.num_uvs) {
    throw std::invalid_argument("instance: per-UV array size mismatch");
  }
  return inst;
}

std::string scenarios_to_json(const ScenarioSet& scen) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["num_uvs"] = scen.num_uvs;
  json arr = json::array();
  for (const Scenario& s : scen.scenarios) {
    json availability = json::array();
    for (uint8_t a : s.availability) availability.push_back(static_cast<int>(a));
    arr.push_back(json{{"availability", std::move(availability)},
                       {"probability", s.probability}});
  }
  j["scenarios"] = std::move(arr);
  return j.dump(2) + "\n";
}

ScenarioSet scenarios_from_json(const std::string& text) {
  const json j = json::parse(text);
  expect_keys(j, "scenarios", {"schema_version", "num_uvs", "scenarios"});
  check_version(j, "scenarios");
  ScenarioSet scen;
  scen.num_uvs = j.at("num_uvs").get<int>();
  for (const json& s : j.at("scenarios")) {
    expect_keys(s, "scenario", {"availability", "probability"});
    Scenario sc;
    for (const json& a : s.at("availability")) {
      sc.availability.push_back(static_cast<uint8_t>(a.get<int>()));
    }
    sc.probability = s.at("probability").get<double>();
    scen.scenarios.push_back(std::move(sc));
  }
  validate_scenarios(scen);
  return scen;
}

std::string plan_to_json(const Plan& plan) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["num_uvs"] = plan.num_uvs;
  j["num_stations"] = plan.num_stations;
  j["num_nodes"] = plan.num_nodes;
  j["objective_lb"] = plan.objective_lb;
  j["objective_ub"] =
      plan.objective_ub == kUnbounded ? json(nullptr) : json(plan.objective_ub);
  json routes = json::array();
  for (int m = 0; m < plan.num_uvs; ++m) {
    json edges = json::array();
    for (NodeId i = 0; i < plan.num_nodes; ++i) {
      for (NodeId j2 = 0; j2 < plan.num_nodes; ++j2) {
        if (i == j2 || !plan.y(m, i, j2)) continue;
        edges.push_back(json{{"from", i}, {"to", j2}, {"fuel", plan.x(m, i, j2)}});
      }
    }
    json stations = json::array();
    for (int r = 1; r < plan.num_stations; ++r) {
      if (plan.z(m, r)) stations.push_back(r);
    }
    routes.push_back(json{{"uv", m},
                          {"edges", std::move(edges)},
                          {"stations_used", std::move(stations)}});
  }
  j["routes"] = std::move(routes);
  return j.dump(2) + "\n";
}

Plan plan_from_json(const std::string& text) {
  const json j = json::parse(text);
  expect_keys(j, "plan",
              {"schema_version", "num_uvs", "num_stations", "num_nodes",
               "objective_lb", "objective_ub", "routes"});
  check_version(j, "plan");
  Plan plan;
  plan.num_uvs = j.at("num_uvs").get<int>();
  plan.num_stations = j.at("num_stations").get<int>();
  plan.num_nodes = j.at("num_nodes").get<int>();
  plan.objective_lb = j.at("objective_lb").get<double>();
  plan.objective_ub = j.at("objective_ub").is_null()
                          ? kUnbounded
                          : j.at("objective_ub").get<double>();
  const int V = plan.num_nodes;
  plan.edge_use.assign(static_cast<size_t>(plan.num_uvs) * V * V, 0);
  plan.cumulative_fuel.assign(plan.edge_use.size(), 0.0);
  plan.station_use.assign(static_cast<size_t>(plan.num_uvs) * plan.num_stations,
                          0);
  for (const json& route : j.at("routes")) {
    expect_keys(route, "route", {"uv", "edges", "stations_used"});
    const int m = route.at("uv").get<int>();
    if (m < 0 || m >= plan.num_uvs) {
      throw std::invalid_argument("plan: uv index out of range");
    }
    for (const json& e : route.at("edges")) {
      expect_keys(e, "edge", {"from", "to", "fuel"});
      const int from = e.at("from").get<int>(), to = e.at("to").get<int>();
      if (from < 0 || from >= V || to < 0 || to >= V || from == to) {
        throw std::invalid_argument("plan: bad edge endpoint");
      }
      plan.set_y(m, from, to, 1);
      plan.set_x(m, from, to, e.at("fuel").get<double>());
    }
    for (const json& r : route.at("stations_used")) {
      const int rr = r.get<int>();
      if (rr < 1 || rr >= plan.num_stations) {
        throw std::invalid_argument("plan: bad station index");
      }
      plan.set_z(m, rr, 1);
    }
  }
  return plan;
}

namespace {

json stats_json(const SolveStats& stats) {
  const char* status = nullptr;
  switch (stats.status) {
    case MipStatus::kOptimal: status = "optimal"; break;
    case MipStatus::kInfeasible: status = "infeasible"; break;
    case MipStatus::kUnbounded: status = "unbounded"; break;
    case MipStatus::kLimit: status = "limit"; break;
  }
  json j{{"status", status},
         {"nodes", stats.nodes},
         {"subtour_cuts", stats.subtour_cuts},
         {"benders_cuts", stats.benders_cuts},
         {"wall_seconds", stats.wall_seconds},
         {"lp_iterations", stats.lp_iterations}};
  if (stats.has_incumbent) {
    j["objective"] = stats.incumbent;
    j["bound"] = stats.best_bound;
    j["rel_gap"] = stats.rel_gap;
  } else {
    j["objective"] = nullptr;
    j["bound"] = nullptr;
    j["rel_gap"] = nullptr;
  }
  return j;
}

json sim_json(const SimReport& rep) {
  return json{{"provenance", rep.plan_provenance},
              {"replications", rep.replications},
              {"mean", rep.mean},
              {"stddev", rep.stddev},
              {"per_uv_mean", rep.per_uv_mean},
              {"realized", rep.realized}};
}

}  // namespace

std::string stats_to_json(const SolveStats& stats,
                          const std::vector<IterationLog>& log) {
  json j = stats_json(stats);
  j["schema_version"] = kSchemaVersion;
  if (!log.empty()) {
    json iters = json::array();
    for (const IterationLog& it : log) {
      iters.push_back(json{{"iteration", it.iteration},
                           {"lb", it.lb},
                           {"ub", it.ub},
                           {"new_benders_cuts", it.new_benders_cuts},
                           {"new_sec_cuts", it.new_sec_cuts},
                           {"master_objective", it.master_objective},
                           {"candidate_objective", it.candidate_objective}});
    }
    j["iterations"] = std::move(iters);
  }
  return j.dump(2) + "\n";
}

std::string sim_report_to_json(const SimReport& rep) {
  json j = sim_json(rep);
  j["schema_version"] = kSchemaVersion;
  return j.dump(2) + "\n";
}

std::string vss_report_to_json(const VssReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["expected_stochastic"] = rep.expected_stochastic;
  j["expected_deterministic"] = rep.expected_deterministic;
  j["vss_abs"] = rep.vss_abs;
  j["vss_pct"] = rep.vss_pct;
  j["sim_stochastic"] = sim_json(rep.sim_stochastic);
  j["sim_deterministic"] = sim_json(rep.sim_deterministic);
  j["stochastic_stats"] = stats_json(rep.stochastic_stats);
  j["deterministic_stats"] = stats_json(rep.deterministic_stats);
  j["stochastic_plan"] = json::parse(plan_to_json(rep.stochastic_plan));
  j["deterministic_plan"] = json::parse(plan_to_json(rep.deterministic_plan));
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace sva
