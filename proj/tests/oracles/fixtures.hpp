#pragma once

// Shared fixtures for the test suites.

#include <string>
#include <vector>

#include "sva/model.hpp"

namespace sva::oracle {

// Builds an instance from explicit geometry with Euclidean costs.
inline Instance make_euclidean_instance(std::vector<Point> station_coords,
                                        std::vector<Point> poi_coords,
                                        std::vector<double> incentives,
                                        std::vector<double> fuel_capacity,
                                        std::vector<double> distance_budget) {
  Instance inst;
  inst.num_stations = static_cast<int>(station_coords.size());
  inst.num_pois = static_cast<int>(poi_coords.size());
  inst.num_uvs = static_cast<int>(fuel_capacity.size());
  for (size_t r = 0; r < station_coords.size(); ++r) {
    inst.coords.push_back(station_coords[r]);
    inst.node_names.push_back("r" + std::to_string(r));
  }
  for (size_t p = 0; p < poi_coords.size(); ++p) {
    inst.coords.push_back(poi_coords[p]);
    inst.node_names.push_back("p" + std::to_string(p + 1));
  }
  const int V = inst.V();
  inst.fuel_cost.assign(static_cast<size_t>(V) * V, 0.0);
  for (NodeId i = 0; i < V; ++i) {
    for (NodeId j = 0; j < V; ++j) {
      if (i != j) inst.set_f(i, j, euclid(inst.coords[i], inst.coords[j]));
    }
  }
  inst.incentives = std::move(incentives);
  inst.fuel_capacity = std::move(fuel_capacity);
  inst.distance_budget = std::move(distance_budget);
  return inst;
}

// Canonical two-UV fixture: base at the origin, one refueling station at
// (60,0), three POIs at (30,0), (30,40), (90,0); UV0 incentives (10,20,0),
// UV1 (12,25,30); fuel capacity 100 for both, no distance budget.
inline Instance tiny1() {
  return make_euclidean_instance(
      {{0, 0}, {60, 0}}, {{30, 0}, {30, 40}, {90, 0}},
      {10, 20, 0, 12, 25, 30}, {100, 100}, {kUnbounded, kUnbounded});
}

}  // namespace sva::oracle
