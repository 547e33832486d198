#include "sva/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

namespace sva {

double unit_double(uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  // The (stream+1)-th output of splitmix64 seeded with `seed`.
  uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double max_pairwise_distance(const std::vector<Point>& coords) {
  double best = 0.0;
  for (size_t i = 0; i < coords.size(); ++i) {
    for (size_t j = i + 1; j < coords.size(); ++j) {
      best = std::max(best, euclid(coords[i], coords[j]));
    }
  }
  return best;
}

Instance generate_instance(const GenSpec& spec) {
  if (spec.n_pois < 1) throw std::invalid_argument("n_pois must be >= 1");
  if (spec.n_stations < 1 || spec.n_stations > 4) {
    throw std::invalid_argument("n_stations must be in 1..4 (fixed locations)");
  }
  if (!(spec.fuel_multiplier > 0.0)) {
    throw std::invalid_argument("fuel multiplier must be positive");
  }
  if (!(spec.grid_extent > 0.0)) {
    throw std::invalid_argument("grid extent must be positive");
  }
  if (spec.num_uvs < 1) throw std::invalid_argument("num_uvs must be >= 1");
  if (spec.zero_incentive_fraction < 0.0 || spec.zero_incentive_fraction > 1.0) {
    throw std::invalid_argument("zero_incentive_fraction must be in [0,1]");
  }
  for (double hi : spec.incentive_max) {
    if (hi < 0.0) throw std::invalid_argument("incentive range must be nonnegative");
  }

  Instance inst;
  inst.num_stations = spec.n_stations + 1;
  inst.num_pois = spec.n_pois;
  inst.num_uvs = spec.num_uvs;

  const double g = spec.grid_extent;
  const double lo = 0.10 * g, hi = 0.90 * g;
  const Point corners[4] = {{lo, lo}, {lo, hi}, {hi, lo}, {hi, hi}};

  inst.coords.push_back({0.5 * g, 0.5 * g});  // r0 at the grid center
  inst.node_names.push_back("r0");
  for (int r = 0; r < spec.n_stations; ++r) {
    inst.coords.push_back(corners[r]);
    inst.node_names.push_back("r" + std::to_string(r + 1));
  }

  std::mt19937_64 rng(spec.seed);
  for (int j = 0; j < spec.n_pois; ++j) {
    const double px = unit_double(rng()) * g;
    const double py = unit_double(rng()) * g;
    inst.coords.push_back({px, py});
    inst.node_names.push_back("p" + std::to_string(j + 1));
  }

  inst.incentives.resize(static_cast<size_t>(spec.num_uvs) * spec.n_pois);
  for (int m = 0; m < spec.num_uvs; ++m) {
    double range = 170.0;
    if (m < static_cast<int>(spec.incentive_max.size())) {
      range = spec.incentive_max[m];
    } else if (m == 0) {
      range = 150.0;
    }
    for (int j = 0; j < spec.n_pois; ++j) {
      inst.incentives[m * spec.n_pois + j] = unit_double(rng()) * range;
    }
  }

  // Zero out a uniformly chosen share of UV-0 incentives (partial
  // Fisher-Yates; one rng() word per swap).
  const int zero_count = static_cast<int>(
      std::llround(spec.zero_incentive_fraction * spec.n_pois));
  std::vector<int> order(spec.n_pois);
  for (int j = 0; j < spec.n_pois; ++j) order[j] = j;
  for (int t = 0; t < zero_count; ++t) {
    const int pick = t + static_cast<int>(rng() % (spec.n_pois - t));
    std::swap(order[t], order[pick]);
    inst.incentives[order[t]] = 0.0;
  }

  const int V = inst.V();
  inst.fuel_cost.assign(static_cast<size_t>(V) * V, 0.0);
  for (NodeId i = 0; i < V; ++i) {
    for (NodeId j = 0; j < V; ++j) {
      if (i == j) continue;
      double d = euclid(inst.coords[i], inst.coords[j]);
      if (spec.round_costs_to_int) d = std::floor(d);
      inst.set_f(i, j, d);
    }
  }
  if (spec.round_costs_to_int) {
    // Flooring can break the triangle inequality by up to 2 units; repair.
    inst.fuel_cost = metric_closure(inst.fuel_cost, V);
  }

  const double lambda = max_pairwise_distance(inst.coords);
  inst.fuel_capacity.assign(spec.num_uvs, spec.fuel_multiplier * lambda);
  inst.distance_budget.assign(spec.num_uvs, 3.0 * lambda);
  return inst;
}

ScenarioSet build_scenarios(const std::vector<double>& availability_percent) {
  if (availability_percent.empty()) {
    throw std::invalid_argument("no availability percentages given");
  }
  for (double p : availability_percent) {
    if (!(p >= 0.0 && p <= 100.0)) {
      throw std::invalid_argument("availability percent must be in [0, 100]");
    }
  }
  const int M = static_cast<int>(availability_percent.size());

  ScenarioSet scen;
  scen.num_uvs = M;
  scen.scenarios.push_back({std::vector<uint8_t>(M, 1), 1.0});
  for (int m = 0; m < M; ++m) {
    const double p = availability_percent[m] / 100.0;
    if (p == 1.0) continue;
    if (p == 0.0) {
      for (Scenario& s : scen.scenarios) s.availability[m] = 0;
      continue;
    }
    std::vector<Scenario> expanded;
    expanded.reserve(2 * scen.scenarios.size());
    for (const Scenario& s : scen.scenarios) {
      Scenario up = s;
      up.availability[m] = 1;
      up.probability = s.probability * p;
      expanded.push_back(std::move(up));
      Scenario down = s;
      down.availability[m] = 0;
      down.probability = s.probability * (1.0 - p);
      expanded.push_back(std::move(down));
    }
    scen.scenarios = std::move(expanded);
  }
  validate_scenarios(scen);
  return scen;
}

std::vector<double> metric_closure(const std::vector<double>& raw_costs, int n) {
  if (static_cast<int>(raw_costs.size()) != n * n) {
    throw std::invalid_argument("cost matrix size mismatch");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && raw_costs[i * n + j] < 0.0) {
        throw std::invalid_argument("negative cost in metric_closure input");
      }
    }
  }

  std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
  using Item = std::pair<double, int>;  // (distance, node)
  for (int src = 0; src < n; ++src) {
    std::vector<double> dist(n, kUnbounded);
    dist[src] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (int w = 0; w < n; ++w) {
        if (w == u) continue;
        const double nd = d + raw_costs[u * n + w];
        if (nd < dist[w]) {
          dist[w] = nd;
          heap.push({nd, w});
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      if (j != src) out[src * n + j] = dist[j];
    }
  }
  return out;
}

}  // namespace sva
