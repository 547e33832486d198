#include <doctest.h>

#include <random>

#include "enumerate.hpp"
#include "fixtures.hpp"
#include "route_enum.hpp"
#include "sva/formulation.hpp"
#include "sva/instance_gen.hpp"
#include "sva/solve.hpp"

using namespace sva;

TEST_CASE("variable index is a dense bijection") {
  VariableIndex vx;
  vx.num_nodes = 5;
  vx.num_stations = 2;
  vx.num_uvs = 2;
  std::vector<char> hit(vx.num_first_stage_cols(), 0);
  for (int m = 0; m < 2; ++m) {
    for (NodeId i = 0; i < 5; ++i) {
      for (NodeId j = 0; j < 5; ++j) {
        if (i == j) continue;
        hit[vx.y(m, i, j)]++;
        hit[vx.x(m, i, j)]++;
        const auto [a, b] = vx.edge_of(vx.edge_id(i, j));
        CHECK(a == i);
        CHECK(b == j);
      }
    }
    hit[vx.z(m, 1)]++;
  }
  for (char h : hit) CHECK(h == 1);
}

TEST_CASE("row families match the symbolic tally") {
  const Instance t1 = oracle::tiny1();
  GenSpec gs;
  gs.n_pois = 5;
  gs.seed = 2;
  const Instance gen = generate_instance(gs);
  for (const Instance& inst : {t1, gen}) {
    for (bool strengthen : {true, false}) {
      for (bool per_uv : {true, false}) {
        FormulationOptions opt{strengthen, per_uv};
        const BuiltModel bm = build_first_stage(inst, opt);
        const auto expected = oracle::expected_row_counts(inst, opt);
        CHECK(bm.row_families == expected);
        int total = 0;
        for (const auto& [name, count] : expected) total += count;
        CHECK(bm.mip.lp.num_rows() == total);
      }
    }
  }
}

TEST_CASE("strengthening relaxes the station flags") {
  const Instance t1 = oracle::tiny1();
  const BuiltModel strong = build_first_stage(t1, {true, true});
  for (int m = 0; m < t1.num_uvs; ++m) {
    for (int r = 1; r < t1.num_stations; ++r) {
      CHECK(!strong.mip.integral[strong.vidx.z(m, r)]);
    }
  }
  const BuiltModel weak = build_first_stage(t1, {false, true});
  for (int m = 0; m < t1.num_uvs; ++m) {
    for (int r = 1; r < t1.num_stations; ++r) {
      CHECK(weak.mip.integral[weak.vidx.z(m, r)]);
    }
  }
}

TEST_CASE("invalid instances are rejected") {
  Instance broken = oracle::tiny1();
  broken.fuel_capacity[0] = -1.0;
  CHECK_THROWS_AS(build_first_stage(broken, {}), std::invalid_argument);
}

TEST_CASE("textbook disconnected subtour is separated") {
  const Instance t1 = oracle::tiny1();  // r0=0, r1=1, p1=2, p2=3, p3=4
  const int V = t1.V();
  std::vector<double> y(V * V, 0.0), z(t1.num_stations, 0.0);
  // Route r0 -> p1 -> r0 plus a detached cycle r1 -> p2 -> r1 with z(r1)=1.
  y[0 * V + 2] = y[2 * V + 0] = 1.0;
  y[1 * V + 3] = y[3 * V + 1] = 1.0;
  z[1] = 1.0;
  const std::vector<SecCut> cuts = separate_sec(t1, y, z, 0);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].station == 1);
  CHECK(cuts[0].uv == 0);
  CHECK(cuts[0].vertex_set == std::vector<NodeId>{1, 3});
}

TEST_CASE("connected tours produce no cuts") {
  const Instance t1 = oracle::tiny1();
  const int V = t1.V();
  std::vector<double> y(V * V, 0.0), z(t1.num_stations, 0.0);
  // r0 -> p1 -> r1 -> p3 -> r0
  y[0 * V + 2] = y[2 * V + 1] = y[1 * V + 4] = y[4 * V + 0] = 1.0;
  z[1] = 1.0;
  CHECK(separate_sec(t1, y, z, 0).empty());
}

TEST_CASE("fractional candidates are rejected by separation") {
  const Instance t1 = oracle::tiny1();
  const int V = t1.V();
  std::vector<double> y(V * V, 0.0), z(t1.num_stations, 0.0);
  y[0 * V + 2] = 0.5;
  CHECK_THROWS_AS(separate_sec(t1, y, z, 0), std::invalid_argument);
}

TEST_CASE("separation decisions match subset enumeration on random candidates") {
  GenSpec gs;
  gs.n_pois = 5;  // V = 10 with the default four stations
  gs.seed = 31;
  const Instance inst = generate_instance(gs);
  const int V = inst.V();
  std::mt19937_64 rng(404);
  int violated_cases = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> y(V * V, 0.0), z(inst.num_stations, 0.0);
    const double density = 0.05 + 0.25 * unit_double(rng());
    for (NodeId i = 0; i < V; ++i) {
      for (NodeId j = 0; j < V; ++j) {
        if (i != j && unit_double(rng()) < density) y[i * V + j] = 1.0;
      }
    }
    for (int r = 1; r < inst.num_stations; ++r) {
      z[r] = (rng() & 1u) ? 1.0 : 0.0;
    }
    const std::vector<SecCut> cuts = separate_sec(inst, y, z, 0);
    const auto violations = oracle::enumerate_sec_violations(inst, y, z);
    CHECK(cuts.empty() == violations.empty());
    if (!violations.empty()) ++violated_cases;
    // Soundness: every returned cut is violated by the candidate.
    for (const SecCut& cut : cuts) {
      std::vector<char> in_set(V, 0);
      for (NodeId v : cut.vertex_set) in_set[v] = 1;
      CHECK(!in_set[0]);
      CHECK(z[cut.station] > 0.5);
      double boundary = 0.0;
      for (NodeId i = 0; i < V; ++i) {
        if (!in_set[i]) continue;
        for (NodeId j = 0; j < V; ++j) {
          if (i != j && !in_set[j]) boundary += y[i * V + j];
        }
      }
      CHECK(boundary < 0.5);
    }
  }
  CHECK(violated_cases >= 5);
  CHECK(violated_cases <= 45);  // both decision branches exercised
}

TEST_CASE("all-available DEP collapses to the deterministic model") {
  const Instance t1 = oracle::tiny1();
  ScenarioSet sure;
  sure.num_uvs = 2;
  sure.scenarios = {{{1, 1}, 1.0}};
  const BuiltModel dep = build_dep(t1, sure, SecondStageKind::kRelaxed, {});
  // v columns exist, one block per scenario
  CHECK(dep.mip.lp.num_cols() ==
        dep.vidx.num_first_stage_cols() + t1.num_uvs * t1.num_edges());

  SolverOptions opt;
  const SolveOutcome stoch = solve_instance(t1, sure, SolveMode::kDepRelaxed, opt);
  const SolveOutcome det = solve_deterministic(t1, opt);
  REQUIRE(stoch.has_plan);
  REQUIRE(det.has_plan);
  CHECK(stoch.stats.incumbent == doctest::Approx(det.stats.incumbent));
  CHECK(det.stats.incumbent == doctest::Approx(67.0));  // enumeration oracle
}

TEST_CASE("binary and relaxed DEP agree on tiny-1") {
  const Instance t1 = oracle::tiny1();
  const ScenarioSet scen = build_scenarios({100.0, 50.0});
  const SolveOutcome bin = solve_instance(t1, scen, SolveMode::kDep, {});
  const SolveOutcome rel = solve_instance(t1, scen, SolveMode::kDepRelaxed, {});
  REQUIRE(bin.has_plan);
  REQUIRE(rel.has_plan);
  CHECK(bin.stats.incumbent ==
        doctest::Approx(rel.stats.incumbent).epsilon(1e-6));
  // Frozen: availability-scaled enumeration optimum for a = (1, 0.5).
  CHECK(bin.stats.incumbent == doctest::Approx(45.0).epsilon(1e-6));
}

TEST_CASE("fuel resets on station-leaving edges at DEP optima") {
  const Instance t1 = oracle::tiny1();
  const ScenarioSet scen = build_scenarios({100.0, 50.0});
  const SolveOutcome out = solve_instance(t1, scen, SolveMode::kDep, {});
  REQUIRE(out.has_plan);
  for (int m = 0; m < t1.num_uvs; ++m) {
    for (int r = 0; r < t1.num_stations; ++r) {
      for (NodeId i = 0; i < t1.V(); ++i) {
        if (i == r) continue;
        const double want = out.plan.y(m, r, i) ? t1.f(r, i) : 0.0;
        CHECK(out.plan.x(m, r, i) == doctest::Approx(want).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("strengthened lower bounds hold at optima") {
  const Instance t1 = oracle::tiny1();
  const SolveOutcome out = solve_deterministic(t1, {});
  REQUIRE(out.has_plan);
  for (int m = 0; m < t1.num_uvs; ++m) {
    for (int j = 0; j < t1.num_pois; ++j) {
      const NodeId p = t1.poi_node(j);
      double s_p = kUnbounded;
      for (int r = 0; r < t1.num_stations; ++r) {
        if (r != p) s_p = std::min(s_p, t1.f(r, p));
      }
      for (NodeId i = 0; i < t1.V(); ++i) {
        if (i == p || !out.plan.y(m, p, i)) continue;
        CHECK(out.plan.x(m, p, i) >= (s_p + t1.f(p, i)) - 1e-6);
      }
    }
  }
}

TEST_CASE("strengthened and plain formulations share integer optima") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    GenSpec gs;
    gs.n_pois = 4;
    gs.n_stations = 2;
    gs.seed = 100 + trial;
    gs.fuel_multiplier = 2.5;
    const Instance inst = generate_instance(gs);
    const ScenarioSet scen = build_scenarios({100.0, 75.0});

    SolverOptions strong;
    SolverOptions weak;
    weak.formulation.strengthen = false;
    const SolveOutcome a = solve_instance(inst, scen, SolveMode::kDep, strong);
    const SolveOutcome b = solve_instance(inst, scen, SolveMode::kDep, weak);
    REQUIRE(a.has_plan);
    REQUIRE(b.has_plan);
    CHECK(a.stats.incumbent ==
          doctest::Approx(b.stats.incumbent).epsilon(1e-6));

    // LP relaxation dominance: the strengthened root bound is never weaker.
    const BuiltModel ms = build_dep(inst, scen, SecondStageKind::kRelaxed,
                                    strong.formulation);
    const BuiltModel mw = build_dep(inst, scen, SecondStageKind::kRelaxed,
                                    weak.formulation);
    const LpSolution rs = solve_lp(ms.mip.lp);
    const LpSolution rw = solve_lp(mw.mip.lp);
    REQUIRE(rs.status == LpStatus::kOptimal);
    REQUIRE(rw.status == LpStatus::kOptimal);
    CHECK(rs.objective <= rw.objective + 1e-6);
  }
}

TEST_CASE("aggregate depot rows keep the per-UV optimum reachable") {
  const Instance t1 = oracle::tiny1();
  SolverOptions agg;
  agg.formulation.per_uv_depot = false;
  const SolveOutcome out = solve_deterministic(t1, agg);
  REQUIRE(out.has_plan);
  // The aggregate reading admits every per-UV solution.
  CHECK(out.stats.incumbent >= 67.0 - 1e-6);
}
