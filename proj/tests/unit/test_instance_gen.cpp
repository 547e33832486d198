#include <doctest.h>

#include <random>

#include "sva/instance_gen.hpp"
#include "sva/json_io.hpp"
#include "sva/model.hpp"

using namespace sva;

TEST_CASE("generated capacity is exactly mult * lambda") {
  for (double mult : {2.25, 2.5, 2.75, 3.0}) {
    GenSpec gs;
    gs.n_pois = 10;
    gs.fuel_multiplier = mult;
    gs.seed = 3;
    const Instance inst = generate_instance(gs);
    const double lambda = max_pairwise_distance(inst.coords);
    for (int m = 0; m < inst.num_uvs; ++m) {
      CHECK(inst.fuel_capacity[m] == mult * lambda);  // exact
      CHECK(inst.distance_budget[m] == 3.0 * lambda);
    }
  }
}

TEST_CASE("generation is deterministic per seed") {
  GenSpec gs;
  gs.n_pois = 12;
  gs.seed = 42;
  const std::string a = instance_to_json(generate_instance(gs));
  const std::string b = instance_to_json(generate_instance(gs));
  CHECK(a == b);
  gs.seed = 43;
  CHECK(instance_to_json(generate_instance(gs)) != a);
}

TEST_CASE("generated instances validate cleanly") {
  GenSpec gs;
  gs.n_pois = 10;
  gs.seed = 7;
  const Instance inst = generate_instance(gs);
  CHECK(validate_instance(inst).valid());
}

TEST_CASE("station layout is fixed across seeds") {
  GenSpec a, b;
  a.n_pois = b.n_pois = 5;
  a.seed = 1;
  b.seed = 999;
  const Instance ia = generate_instance(a), ib = generate_instance(b);
  REQUIRE(ia.num_stations == ib.num_stations);
  for (int r = 0; r < ia.num_stations; ++r) {
    CHECK(ia.coords[r].x == ib.coords[r].x);
    CHECK(ia.coords[r].y == ib.coords[r].y);
  }
  CHECK(ia.coords[0].x == doctest::Approx(50.0));  // r0 at the center
  CHECK(ia.coords[1].x == doctest::Approx(10.0));
  CHECK(ia.coords[1].y == doctest::Approx(10.0));
}

TEST_CASE("bad specs are rejected") {
  GenSpec gs;
  gs.n_pois = 0;
  CHECK_THROWS_AS(generate_instance(gs), std::invalid_argument);
  gs.n_pois = 3;
  gs.n_stations = 5;
  CHECK_THROWS_AS(generate_instance(gs), std::invalid_argument);
  gs.n_stations = 2;
  gs.fuel_multiplier = 0.0;
  CHECK_THROWS_AS(generate_instance(gs), std::invalid_argument);
}

TEST_CASE("scenario construction") {
  SUBCASE("one uncertain UV") {
    const ScenarioSet s = build_scenarios({100.0, 75.0});
    REQUIRE(s.scenarios.size() == 2);
    CHECK(s.scenarios[0].availability == std::vector<uint8_t>{1, 1});
    CHECK(s.scenarios[0].probability == doctest::Approx(0.75));
    CHECK(s.scenarios[1].availability == std::vector<uint8_t>{1, 0});
    CHECK(s.scenarios[1].probability == doctest::Approx(0.25));
  }
  SUBCASE("degenerate percentages collapse") {
    CHECK(build_scenarios({100.0, 100.0}).scenarios.size() == 1);
    const ScenarioSet s = build_scenarios({100.0, 0.0});
    REQUIRE(s.scenarios.size() == 1);
    CHECK(s.scenarios[0].availability == std::vector<uint8_t>{1, 0});
    CHECK(s.scenarios[0].probability == doctest::Approx(1.0));
  }
  SUBCASE("two uncertain UVs form the product") {
    const ScenarioSet s = build_scenarios({50.0, 50.0});
    REQUIRE(s.scenarios.size() == 4);
    for (const Scenario& sc : s.scenarios) {
      CHECK(sc.probability == doctest::Approx(0.25));
    }
  }
  SUBCASE("bad percentages rejected") {
    CHECK_THROWS_AS(build_scenarios({101.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_scenarios({-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_scenarios({}), std::invalid_argument);
  }
}

namespace {

bool is_metric(const std::vector<double>& f, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (f[i * n + j] + f[j * n + k] < f[i * n + k] - 1e-9) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("metric closure repairs broken triangles") {
  // f'(A,B)=5, f'(B,C)=4, f'(A,C)=20 -> f(A,C)=9
  std::vector<double> raw = {0, 5, 20,
                             9, 0, 4,
                             9, 9, 0};
  const std::vector<double> fixed = metric_closure(raw, 3);
  CHECK(fixed[0 * 3 + 2] == doctest::Approx(9.0));
  CHECK(is_metric(fixed, 3));
  // pointwise dominated by the input
  for (int k = 0; k < 9; ++k) CHECK(fixed[k] <= raw[k] + 1e-12);
}

TEST_CASE("metric closure is idempotent and metric on random input") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 8;
    std::vector<double> raw(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) raw[i * n + j] = 1.0 + unit_double(rng()) * 99.0;
      }
    }
    const std::vector<double> once = metric_closure(raw, n);
    CHECK(is_metric(once, n));
    const std::vector<double> twice = metric_closure(once, n);
    for (int k = 0; k < n * n; ++k) {
      CHECK(twice[k] == doctest::Approx(once[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("metric closure rejects negative costs") {
  std::vector<double> raw = {0, -1, 1, 0};
  CHECK_THROWS_AS(metric_closure(raw, 2), std::invalid_argument);
}

TEST_CASE("integer rounding keeps the triangle inequality via repair") {
  GenSpec gs;
  gs.n_pois = 9;
  gs.seed = 17;
  gs.round_costs_to_int = true;
  const Instance inst = generate_instance(gs);
  CHECK(validate_instance(inst).valid());
  CHECK(is_metric(inst.fuel_cost, inst.V()));
}

TEST_CASE("derived seeds differ per stream") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
