#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "route_enum.hpp"
#include "sva/instance_gen.hpp"
#include "sva/lshaped.hpp"
#include "sva/recourse.hpp"

using namespace sva;

TEST_CASE("full availability makes the recourse vanish") {
  const Instance t1 = oracle::tiny1();
  const Plan plan = oracle::best_joint_plan(t1, {1.0, 1.0});
  const RecourseValue rv = solve_recourse(t1, plan, {{1, 1}, 1.0});
  CHECK(rv.value == doctest::Approx(0.0).scale(1.0));
  for (double v : rv.v) CHECK(std::abs(v) <= 1e-6);
  CHECK(check_integrality(rv));
}

TEST_CASE("an unavailable UV loses exactly its first-stage incentive") {
  // One station, one POI worth 42 to the only UV.
  const Instance inst = oracle::make_euclidean_instance(
      {{0, 0}, {20, 0}}, {{10, 0}}, {42}, {100}, {kUnbounded});
  const Plan plan = oracle::plan_from_sequences(inst, {{0, 2, 0}});
  const RecourseValue rv = solve_recourse(inst, plan, {{0}, 1.0});
  CHECK(rv.value == doctest::Approx(-42.0));
  // v = y on the unavailable UV's edges
  for (NodeId i = 0; i < inst.V(); ++i) {
    for (NodeId j = 0; j < inst.V(); ++j) {
      if (i == j) continue;
      const double want = plan.y(0, i, j) ? 1.0 : 0.0;
      CHECK(rv.v[(0 * inst.V() + i) * inst.V() + j] ==
            doctest::Approx(want).scale(1.0));
    }
  }
  CHECK(check_integrality(rv));
}

TEST_CASE("tiny-1 recourse matches the closed form on every scenario") {
  const Instance t1 = oracle::tiny1();
  const Plan plan = oracle::best_joint_plan(t1, {1.0, 0.5});
  const ScenarioSet scen = build_scenarios({50.0, 75.0});
  REQUIRE(scen.scenarios.size() == 4);
  for (const Scenario& s : scen.scenarios) {
    const RecourseValue rv = solve_recourse(t1, plan, s);
    CHECK(rv.value ==
          doctest::Approx(recourse_closed_form(t1, plan, s)).epsilon(1e-6));
    CHECK(check_integrality(rv));
    CHECK(rv.value <= 1e-9);
    CHECK(rv.value >= -t1.total_incentive() - 1e-9);
  }
}

TEST_CASE("random feasible first stages verify the LP cross-check") {
  GenSpec gs;
  gs.n_pois = 6;
  gs.n_stations = 2;
  gs.seed = 21;
  const Instance inst = generate_instance(gs);
  const ScenarioSet scen = build_scenarios({60.0, 40.0});
  std::mt19937_64 rng(17);
  for (int k = 0; k < 25; ++k) {
    const Plan plan = oracle::random_feasible_plan(inst, rng);
    for (const Scenario& s : scen.scenarios) {
      const RecourseValue rv = solve_recourse(inst, plan, s);
      CHECK(rv.value ==
            doctest::Approx(recourse_closed_form(inst, plan, s)).epsilon(1e-6));
      CHECK(check_integrality(rv));
    }
  }
}

TEST_CASE("check_integrality flags fractional v") {
  RecourseValue rv;
  rv.v = {0.0, 1.0, 0.9999999};
  CHECK(check_integrality(rv));
  rv.v.push_back(0.4);
  CHECK(!check_integrality(rv));
}

TEST_CASE("garbage first stages surface as contract breaches") {
  const Instance t1 = oracle::tiny1();
  Plan plan = make_empty_plan(t1);
  // x flow at p1 inconsistent with y: y says the edge is unused, x says 30.
  plan.set_x(0, 2, 0, 30.0);
  plan.set_y(0, 0, 2, 1);  // no return edge anywhere
  CHECK_THROWS_AS(solve_recourse(t1, plan, Scenario{{1, 1}, 1.0}),
                  RecourseContractError);
}

TEST_CASE("dual-based affine bound dominates the recourse everywhere") {
  // The dual prices taken at one iterate give a valid upper bound on the
  // recourse value at every other feasible first stage (weak duality); the
  // optimality cut encodes exactly that affine function.
  GenSpec gs;
  gs.n_pois = 5;
  gs.n_stations = 2;
  gs.seed = 77;
  const Instance inst = generate_instance(gs);
  const ScenarioSet scen = build_scenarios({100.0, 30.0});
  std::mt19937_64 rng(3);

  const Plan anchor = oracle::random_feasible_plan(inst, rng);
  std::vector<RecourseDuals> duals;
  double expected = 0.0;
  for (const Scenario& s : scen.scenarios) {
    RecourseValue rv = solve_recourse(inst, anchor, s);
    expected += s.probability * rv.value;
    duals.push_back(std::move(rv.duals));
  }
  const OptimalityCut cut = build_optimality_cut(inst, scen, duals);

  // Tight at the generating iterate: a_y'y + a_x'x = -E[phi].
  CHECK(cut.eval(anchor.edge_use, anchor.cumulative_fuel) ==
        doctest::Approx(-expected).epsilon(1e-6));

  for (int k = 0; k < 15; ++k) {
    const Plan other = oracle::random_feasible_plan(inst, rng);
    double phi = 0.0;
    for (const Scenario& s : scen.scenarios) {
      phi += s.probability * solve_recourse(inst, other, s).value;
    }
    // theta = E[phi] satisfies the cut: a_y'y + a_x'x + theta <= 0.
    CHECK(cut.eval(other.edge_use, other.cumulative_fuel) + phi <= 1e-6);
  }
}
