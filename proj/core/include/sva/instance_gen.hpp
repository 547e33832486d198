#pragma once

#include <cstdint>
#include <vector>

#include "sva/model.hpp"

namespace sva {

// Random-instance protocol: POIs uniform on a square grid, four fixed
// refueling-station locations at the grid corners inset by 10% of the extent
// ((10,10), (10,90), (90,10), (90,90) on the default 100x100 grid) with the
// base station r0 at the center, Euclidean fuel costs, F_m = multiplier *
// lambda where lambda is the maximum pairwise node distance, delta_m =
// 3*lambda.
//
// All randomness comes from std::mt19937_64 seeded with `seed`; uniform
// doubles are produced as (rng() >> 11) * 2^-53. Fixed stream order:
//   1. POI coordinates, x then y per POI, in POI order;
//   2. incentives, per UV in order, per POI in order, scaled to [0, hi_m);
//   3. the UV-0 zero mask, a partial Fisher-Yates over POI indices drawing
//      one rng() word per swap.
struct GenSpec {
  uint64_t seed = 0;
  int n_pois = 10;
  int n_stations = 4;  // refueling stations, base r0 excluded; at most 4
  double grid_extent = 100.0;
  double fuel_multiplier = 3.0;  // F_m = multiplier * lambda, protocol set
                                 // {2.25, 2.5, 2.75, 3.0}
  int num_uvs = 2;
  // Upper bound of the per-UV uniform incentive range; when empty, UV 0
  // draws from U(0,150) and every later UV from U(0,170).
  std::vector<double> incentive_max;
  double zero_incentive_fraction = 0.5;  // share of POIs zeroed for UV 0
  bool round_costs_to_int = false;  // floor Euclidean costs, then metric repair
};

// Deterministic in the spec; throws std::invalid_argument on a bad spec
// (n_pois < 1, non-positive multiplier/extent, n_stations outside 1..4, ...).
Instance generate_instance(const GenSpec& spec);

// Bernoulli-product scenario construction from per-UV availability
// percentages in [0, 100]. A UV at 100% (or 0%) is deterministically
// available (unavailable); each strictly-uncertain UV doubles the scenario
// list, available branch first, UVs expanded in index order. Example: two
// UVs at {100, 75} yield {alpha=(1,1) rho=0.75, alpha=(1,0) rho=0.25}.
ScenarioSet build_scenarios(const std::vector<double>& availability_percent);

// Shortest-path repair of a raw cost matrix (row major n x n, diagonal
// ignored): f(i,j) = Dijkstra distance from i to j under f'. The result
// satisfies the directed triangle inequality, is pointwise <= f', and the
// repair is idempotent. Negative input costs are rejected.
std::vector<double> metric_closure(const std::vector<double>& raw_costs, int n);

// Maximum pairwise Euclidean distance over all node pairs (the lambda of the
// generation protocol).
double max_pairwise_distance(const std::vector<Point>& coords);

// Documented sub-seed derivation for independent RNG streams (splitmix64 of
// seed advanced stream+1 times). Used by the CLI and the simulator so every
// run is reproducible from one top-level seed.
uint64_t derive_seed(uint64_t seed, uint64_t stream);

// Uniform double in [0, 1) from one 64-bit word: (w >> 11) * 2^-53.
double unit_double(uint64_t word);

}  // namespace sva
