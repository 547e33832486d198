#include "sva/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

#include "sva/instance_gen.hpp"
#include "sva/tolerances.hpp"

namespace sva {

namespace {

struct RouteInfo {
  std::vector<double> incentives;  // in visit order
  double total = 0.0;
};

// One replication for one UV; returns the collected incentive.
double run_uv(const RouteInfo& route, double fail_prob,
              FailureSemantics semantics, double u) {
  if (route.incentives.empty()) return 0.0;
  if (fail_prob <= 0.0) return route.total;
  if (semantics == FailureSemantics::kAtStart) {
    return u < fail_prob ? 0.0 : route.total;
  }
  // Per-leg: hazard q with (1-q)^s = 1 - p; the single draw u realizes the
  // whole geometric sequence: the UV completes k visits iff u <= (1-q)^k.
  const auto s = static_cast<double>(route.incentives.size());
  if (fail_prob >= 1.0) return 0.0;
  const double log_survive = std::log1p(-fail_prob) / s;  // log(1-q)
  double collected = 0.0;
  for (size_t k = 0; k < route.incentives.size(); ++k) {
    const double survive_k = std::exp(log_survive * static_cast<double>(k + 1));
    if (u > survive_k) break;
    collected += route.incentives[k];
  }
  return collected;
}

}  // namespace

SimReport simulate_mission(const Instance& inst, const Plan& plan,
                           const SimConfig& cfg) {
  if (cfg.replications < 1) {
    throw std::invalid_argument("replications must be >= 1");
  }
  if (static_cast<int>(cfg.failure_probability.size()) != inst.num_uvs) {
    throw std::invalid_argument("failure probability count must match UVs");
  }
  for (double p : cfg.failure_probability) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("failure probability must be in [0, 1]");
    }
  }

  // plan_visit_orders rejects infeasible plans before any sampling.
  const std::vector<std::vector<NodeId>> orders = plan_visit_orders(inst, plan);
  std::vector<RouteInfo> routes(inst.num_uvs);
  for (int m = 0; m < inst.num_uvs; ++m) {
    for (NodeId p : orders[m]) {
      routes[m].incentives.push_back(inst.incentive(m, p));
      routes[m].total += inst.incentive(m, p);
    }
  }

  SimReport rep;
  rep.replications = cfg.replications;
  rep.realized.assign(cfg.replications, 0.0);
  rep.per_uv_mean.assign(inst.num_uvs, 0.0);
  std::vector<double> per_uv_sum(inst.num_uvs, 0.0);

  auto run_range = [&](long begin, long end, std::vector<double>& uv_sum) {
    for (long rep_i = begin; rep_i < end; ++rep_i) {
      std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<uint64_t>(rep_i)));
      double total = 0.0;
      for (int m = 0; m < inst.num_uvs; ++m) {
        const double u = unit_double(rng());
        const double got = run_uv(routes[m], cfg.failure_probability[m],
                                  cfg.semantics, u);
        uv_sum[m] += got;
        total += got;
      }
      rep.realized[rep_i] = total;
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    run_range(0, cfg.replications, per_uv_sum);
  } else {
    const long chunk = (cfg.replications + jobs - 1) / jobs;
    std::vector<std::future<std::vector<double>>> futs;
    for (int t = 0; t < jobs; ++t) {
      const long b = t * chunk, e = std::min<long>(cfg.replications, b + chunk);
      if (b >= e) break;
      futs.push_back(std::async(std::launch::async, [&, b, e]() {
        std::vector<double> sums(inst.num_uvs, 0.0);
        run_range(b, e, sums);
        return sums;
      }));
    }
    for (auto& f : futs) {
      const std::vector<double> sums = f.get();
      for (int m = 0; m < inst.num_uvs; ++m) per_uv_sum[m] += sums[m];
    }
  }

  double sum = 0.0;
  for (double v : rep.realized) sum += v;
  rep.mean = sum / static_cast<double>(cfg.replications);
  double ss = 0.0;
  for (double v : rep.realized) ss += (v - rep.mean) * (v - rep.mean);
  rep.stddev = cfg.replications > 1
                   ? std::sqrt(ss / static_cast<double>(cfg.replications - 1))
                   : 0.0;
  for (int m = 0; m < inst.num_uvs; ++m) {
    rep.per_uv_mean[m] = per_uv_sum[m] / static_cast<double>(cfg.replications);
  }
  return rep;
}

VssReport compute_vss(const Instance& inst, const ScenarioSet& scen,
                      const VssConfig& cfg) {
  validate_scenarios(scen);
  VssReport out;

  SolveOutcome stoch = solve_instance(inst, scen, cfg.mode, cfg.solver);
  SolveOutcome det = solve_deterministic(inst, cfg.solver);
  if (!stoch.has_plan || !det.has_plan) {
    throw std::runtime_error("vss: solver returned no plan within its limits");
  }
  out.stochastic_plan = stoch.plan;
  out.deterministic_plan = det.plan;
  out.stochastic_stats = stoch.stats;
  out.deterministic_stats = det.stats;

  out.expected_stochastic = expected_objective(inst, stoch.plan, scen);
  out.expected_deterministic = expected_objective(inst, det.plan, scen);
  out.vss_abs = out.expected_stochastic - out.expected_deterministic;
  out.vss_pct = 100.0 * out.vss_abs /
                std::max(std::abs(out.expected_stochastic), tol::kGapFloor);

  SimConfig sim = cfg.sim;
  if (sim.failure_probability.empty()) {
    const std::vector<double> a = availability_scale(scen);
    sim.failure_probability.resize(inst.num_uvs);
    for (int m = 0; m < inst.num_uvs; ++m) {
      sim.failure_probability[m] = 1.0 - a[m];
    }
  }
  out.sim_stochastic = simulate_mission(inst, stoch.plan, sim);
  out.sim_stochastic.plan_provenance = "stochastic";
  out.sim_deterministic = simulate_mission(inst, det.plan, sim);
  out.sim_deterministic.plan_provenance = "deterministic";
  return out;
}

}  // namespace sva
