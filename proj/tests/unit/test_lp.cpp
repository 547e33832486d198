#include <doctest.h>

#include <cmath>
#include <random>

#include "enumerate.hpp"
#include "sva/instance_gen.hpp"
#include "sva/lp.hpp"
#include "sva/tolerances.hpp"

using namespace sva;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A random bounded LP with all-finite bounds: good food for the vertex
// enumeration oracle.
LinearProgram random_lp(std::mt19937_64& rng, int n, int m) {
  auto u = [&rng](double lo, double hi) {
    return lo + unit_double(rng()) * (hi - lo);
  };
  LinearProgram lp;
  lp.sense = (rng() & 1u) ? Sense::kMaximize : Sense::kMinimize;
  for (int j = 0; j < n; ++j) lp.add_col(u(-5, 5), 0.0, u(0.5, 3.0));
  for (int i = 0; i < m; ++i) {
    LpRow row;
    for (int j = 0; j < n; ++j) {
      if (u(0, 1) < 0.7) row.entries.push_back({j, u(-2, 2)});
    }
    if (row.entries.empty()) row.entries.push_back({static_cast<int>(rng() % n), 1.0});
    const double pickrel = u(0, 1);
    row.rel = pickrel < 0.6 ? RowRel::kLe : (pickrel < 0.85 ? RowRel::kGe : RowRel::kEq);
    row.rhs = u(-1.5, 3.0);
    lp.add_row(std::move(row));
  }
  return lp;
}

}  // namespace

TEST_CASE("two-variable maximum with duals") {
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  lp.add_col(1.0, 0.0, kInf, "x");
  lp.add_col(1.0, 0.0, kInf, "y");
  lp.add_row({{{0, 1.0}}, RowRel::kLe, 1.0}, "cx");
  lp.add_row({{{1, 1.0}}, RowRel::kLe, 2.0}, "cy");
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(2.0));
  CHECK(s.row_dual[0] == doctest::Approx(1.0));
  CHECK(s.row_dual[1] == doctest::Approx(1.0));
}

TEST_CASE("crossed constraints are infeasible") {
  LinearProgram lp;
  lp.sense = Sense::kMinimize;
  lp.add_col(0.0, -kInf, kInf);
  lp.add_row({{{0, 1.0}}, RowRel::kGe, 1.0});
  lp.add_row({{{0, 1.0}}, RowRel::kLe, 0.0});
  CHECK(solve_lp(lp).status == LpStatus::kInfeasible);
}

TEST_CASE("unbounded rays are detected") {
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  lp.add_col(1.0, 0.0, kInf);
  lp.add_row({{{0, 1.0}}, RowRel::kGe, 0.0});
  CHECK(solve_lp(lp).status == LpStatus::kUnbounded);
}

TEST_CASE("random LPs match the vertex-enumeration oracle") {
  std::mt19937_64 rng(2024);
  int optimal_seen = 0, trials = 0;
  while (optimal_seen < 20 && trials < 80) {
    ++trials;
    const int n = 3 + static_cast<int>(rng() % 4);   // 3..6
    const int m = 2 + static_cast<int>(rng() % 6);   // 2..7
    LinearProgram lp = random_lp(rng, n, m);
    const LpSolution s = solve_lp(lp);
    const std::optional<double> oracle_opt = oracle::lp_vertex_optimum(lp);
    if (oracle_opt.has_value()) {
      REQUIRE(s.status == LpStatus::kOptimal);
      CHECK(s.objective ==
            doctest::Approx(*oracle_opt).epsilon(1e-6).scale(1.0));
      ++optimal_seen;
    } else {
      CHECK(s.status == LpStatus::kInfeasible);
    }
  }
  CHECK(optimal_seen == 20);  // the generator must exercise the optimal path
}

TEST_CASE("strong duality identity holds on random optima") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    LinearProgram lp = random_lp(rng, 5, 6);
    const LpSolution s = solve_lp(lp);
    if (s.status != LpStatus::kOptimal) continue;
    double dual_obj = 0.0;
    for (int i = 0; i < lp.num_rows(); ++i) {
      dual_obj += s.row_dual[i] * lp.rows[i].rhs;
    }
    for (int j = 0; j < lp.num_cols(); ++j) {
      dual_obj += s.reduced_cost[j] * s.x[j];
    }
    CHECK(dual_obj == doctest::Approx(s.objective).epsilon(tol::kLpDualityRel));
  }
}

TEST_CASE("add_rows_and_resolve") {
  std::mt19937_64 rng(31);
  SUBCASE("non-binding row leaves the optimum unchanged") {
    LinearProgram lp;
    lp.sense = Sense::kMaximize;
    lp.add_col(1.0, 0.0, 1.0);
    lp.add_col(2.0, 0.0, 1.0);
    lp.add_row({{{0, 1.0}, {1, 1.0}}, RowRel::kLe, 2.0});
    LpSolution base = solve_lp(lp);
    REQUIRE(base.status == LpStatus::kOptimal);
    const LpRow loose{{{0, 1.0}, {1, 1.0}}, RowRel::kLe, 10.0};
    const LpSolution after = add_rows_and_resolve(lp, {&loose, 1}, base);
    REQUIRE(after.status == LpStatus::kOptimal);
    CHECK(after.objective == doctest::Approx(base.objective));
  }
  SUBCASE("cutting row weakly worsens a maximum") {
    LinearProgram lp;
    lp.sense = Sense::kMaximize;
    lp.add_col(1.0, 0.0, 2.0);
    lp.add_col(1.0, 0.0, 2.0);
    lp.add_row({{{0, 1.0}, {1, 1.0}}, RowRel::kLe, 3.0});
    LpSolution base = solve_lp(lp);
    REQUIRE(base.status == LpStatus::kOptimal);
    const LpRow cut{{{0, 1.0}, {1, 1.0}}, RowRel::kLe, 1.5};
    const LpSolution after = add_rows_and_resolve(lp, {&cut, 1}, base);
    REQUIRE(after.status == LpStatus::kOptimal);
    CHECK(after.objective <= base.objective + 1e-9);
    CHECK(after.objective == doctest::Approx(1.5));
  }
  SUBCASE("warm resolve equals a from-scratch solve") {
    for (int trial = 0; trial < 10; ++trial) {
      LinearProgram lp = random_lp(rng, 5, 5);
      lp.sense = Sense::kMaximize;
      LpSolution base = solve_lp(lp);
      if (base.status != LpStatus::kOptimal) continue;
      LpRow cut;
      for (int j = 0; j < lp.num_cols(); ++j) {
        cut.entries.push_back({j, 1.0 + unit_double(rng())});
      }
      cut.rel = RowRel::kLe;
      double act = 0.0;
      for (const RowEntry& e : cut.entries) act += e.coef * base.x[e.col];
      cut.rhs = act * 0.8;  // cuts off the old optimum
      LinearProgram fresh = lp;
      fresh.add_row(cut);
      const LpSolution scratch = solve_lp(fresh);
      const LpSolution warm = add_rows_and_resolve(lp, {&cut, 1}, base);
      REQUIRE(warm.status == scratch.status);
      if (scratch.status == LpStatus::kOptimal) {
        CHECK(warm.objective == doctest::Approx(scratch.objective).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("degenerate cycling example terminates") {
  // Beale's classic cycling LP (minimization); Dantzig with a fixed pivot
  // rule cycles forever without an anti-cycling fallback.
  LinearProgram lp;
  lp.sense = Sense::kMinimize;
  lp.add_col(-0.75, 0.0, kInf);
  lp.add_col(150.0, 0.0, kInf);
  lp.add_col(-0.02, 0.0, kInf);
  lp.add_col(6.0, 0.0, kInf);
  lp.add_row({{{0, 0.25}, {1, -60.0}, {2, -1.0 / 25.0}, {3, 9.0}}, RowRel::kLe, 0.0});
  lp.add_row({{{0, 0.5}, {1, -90.0}, {2, -1.0 / 50.0}, {3, 3.0}}, RowRel::kLe, 0.0});
  lp.add_row({{{2, 1.0}}, RowRel::kLe, 1.0});
  LpOptions opt;
  opt.max_iterations = 5000;  // far below the default budget
  const LpSolution s = solve_lp(lp, nullptr, opt);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(-0.05));
  CHECK(s.iterations < 5000);
}

TEST_CASE("warm starts reproduce the cold optimum") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    LinearProgram lp = random_lp(rng, 6, 6);
    const LpSolution cold = solve_lp(lp);
    if (cold.status != LpStatus::kOptimal) continue;
    // Perturb the objective, solve, then warm start back on the original.
    LinearProgram nudged = lp;
    for (double& c : nudged.objective) c += 0.25;
    const LpSolution mid = solve_lp(nudged);
    if (mid.status != LpStatus::kOptimal) continue;
    const LpSolution warm = solve_lp(lp, &mid.basis);
    REQUIRE(warm.status == LpStatus::kOptimal);
    CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-7));
  }
}

TEST_CASE("lp validation rejects malformed programs") {
  LinearProgram lp;
  lp.add_col(1.0, 0.0, 1.0);
  lp.add_row({{{0, 1.0}, {0, 2.0}}, RowRel::kLe, 1.0});  // duplicate entry
  CHECK_THROWS_AS(lp.validate(), std::invalid_argument);

  LinearProgram nan_lp;
  nan_lp.add_col(std::nan(""), 0.0, 1.0);
  CHECK_THROWS_AS(nan_lp.validate(), std::invalid_argument);

  LinearProgram crossed;
  crossed.add_col(1.0, 2.0, 1.0);
  CHECK_THROWS_AS(crossed.validate(), std::invalid_argument);
}

TEST_CASE("text dump mentions every row") {
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  lp.add_col(1.0, 0.0, 1.0, "a");
  lp.add_col(1.0, 0.0, 1.0, "b");
  lp.add_row({{{0, 1.0}, {1, 1.0}}, RowRel::kLe, 1.0}, "sum");
  const std::string text = lp_to_text(lp);
  CHECK(text.find("max:") != std::string::npos);
  CHECK(text.find("sum:") != std::string::npos);
  CHECK(text.find("<=") != std::string::npos);
  CHECK(text.find("bounds:") != std::string::npos);
}
