#include "enumerate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace sva::oracle {

namespace {

struct Constraint {
  // a'x = b when active
  std::vector<double> a;
  double b;
};

bool feasible_point(const LinearProgram& lp, const Eigen::VectorXd& x) {
  const int n = lp.num_cols();
  for (int j = 0; j < n; ++j) {
    if (x[j] < lp.lower[j] - 1e-7 || x[j] > lp.upper[j] + 1e-7) return false;
  }
  for (const LpRow& row : lp.rows) {
    double act = 0.0;
    for (const RowEntry& e : row.entries) act += e.coef * x[e.col];
    const double s = 1e-7 * (1.0 + std::abs(row.rhs));
    if (row.rel == RowRel::kLe && act > row.rhs + s) return false;
    if (row.rel == RowRel::kGe && act < row.rhs - s) return false;
    if (row.rel == RowRel::kEq && std::abs(act - row.rhs) > s) return false;
  }
  return true;
}

}  // namespace

std::optional<double> lp_vertex_optimum(const LinearProgram& lp) {
  const int n = lp.num_cols();
  if (n > 8) throw std::invalid_argument("vertex oracle: too many columns");

  std::vector<Constraint> pool;
  for (const LpRow& row : lp.rows) {
    Constraint c{std::vector<double>(n, 0.0), row.rhs};
    for (const RowEntry& e : row.entries) c.a[e.col] += e.coef;
    pool.push_back(std::move(c));
  }
  for (int j = 0; j < n; ++j) {
    Constraint lo{std::vector<double>(n, 0.0), lp.lower[j]};
    lo.a[j] = 1.0;
    pool.push_back(std::move(lo));
    Constraint up{std::vector<double>(n, 0.0), lp.upper[j]};
    up.a[j] = 1.0;
    pool.push_back(std::move(up));
  }
  const int P = static_cast<int>(pool.size());
  if (P > 26) throw std::invalid_argument("vertex oracle: pool too large");

  std::optional<double> best;
  std::vector<int> idx(n, 0);
  // all n-subsets of the pool
  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  auto advance = [&]() {
    int i = n - 1;
    while (i >= 0 && comb[i] == P - n + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int k = i + 1; k < n; ++k) comb[k] = comb[k - 1] + 1;
    return true;
  };
  do {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) A(r, c) = pool[comb[r]].a[c];
      b[r] = pool[comb[r]].b;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd x = lu.solve(b);
    if (!feasible_point(lp, x)) continue;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
    if (!best || (lp.sense == Sense::kMaximize ? obj > *best : obj < *best)) {
      best = obj;
    }
  } while (advance());
  return best;
}

std::optional<double> binary_enumeration_optimum(const MipProblem& p) {
  const int n = p.lp.num_cols();
  if (n > 24) throw std::invalid_argument("binary oracle: too many columns");
  for (int j = 0; j < n; ++j) {
    if (!p.integral[j] || p.lp.lower[j] < -1e-9 || p.lp.upper[j] > 1.0 + 1e-9) {
      throw std::invalid_argument("binary oracle: pure binary programs only");
    }
  }
  std::optional<double> best;
  for (uint32_t bits = 0; bits < (1u << n); ++bits) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      const double v = (bits >> j) & 1u;
      if (v < p.lp.lower[j] - 1e-9 || v > p.lp.upper[j] + 1e-9) ok = false;
    }
    for (const LpRow& row : p.lp.rows) {
      if (!ok) break;
      double act = 0.0;
      for (const RowEntry& e : row.entries) act += e.coef * ((bits >> e.col) & 1u);
      if (row.rel == RowRel::kLe && act > row.rhs + 1e-9) ok = false;
      if (row.rel == RowRel::kGe && act < row.rhs - 1e-9) ok = false;
      if (row.rel == RowRel::kEq && std::abs(act - row.rhs) > 1e-9) ok = false;
    }
    if (!ok) continue;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += p.lp.objective[j] * ((bits >> j) & 1u);
    if (!best || (p.lp.sense == Sense::kMaximize ? obj > *best : obj < *best)) {
      best = obj;
    }
  }
  return best;
}

std::vector<ViolatedSubset> enumerate_sec_violations(
    const Instance& inst, const std::vector<double>& y_uv,
    const std::vector<double>& z_uv) {
  const int V = inst.V();
  if (V > 20) throw std::invalid_argument("sec oracle: too many nodes");
  std::vector<ViolatedSubset> out;
  // subsets of V \ {r0}, encoded over nodes 1..V-1
  for (uint32_t bits = 1; bits < (1u << (V - 1)); ++bits) {
    auto in_set = [bits](NodeId v) {
      return v != 0 && ((bits >> (v - 1)) & 1u) != 0;
    };
    double boundary = 0.0;
    for (NodeId i = 0; i < V; ++i) {
      if (!in_set(i)) continue;
      for (NodeId j = 0; j < V; ++j) {
        if (i != j && !in_set(j)) boundary += y_uv[i * V + j];
      }
    }
    for (int r = 1; r < inst.num_stations; ++r) {
      if (!in_set(r)) continue;
      if (z_uv[r] > 0.5 && boundary < z_uv[r] - 0.5) {
        ViolatedSubset vs;
        vs.station = r;
        for (NodeId v = 1; v < V; ++v) {
          if (in_set(v)) vs.vertex_set.push_back(v);
        }
        out.push_back(std::move(vs));
      }
    }
  }
  return out;
}

std::map<std::string, int> expected_row_counts(const Instance& inst,
                                               const FormulationOptions& opt) {
  const int V = inst.V(), M = inst.num_uvs, S = inst.num_stations,
            P = inst.num_pois;
  std::map<std::string, int> rc;
  rc["flow"] = M * (V - 1);
  rc["depot_out"] = opt.per_uv_depot ? M : 1;
  rc["depot_in"] = opt.per_uv_depot ? M : 1;
  if (opt.strengthen) {
    rc["station_indicator"] = M * (S - 1) * (V - 1);
  } else {
    rc["station_bigq"] = M * (S - 1);
  }
  rc["visit_in"] = P;
  rc["visit_out"] = P;
  rc["fuel_flow"] = M * P;
  rc["station_depart"] = M * S * (V - 1);
  if (opt.strengthen) {
    rc["cap_poi"] = M * P * (V - 1);
    rc["cap_station"] = M * S * (V - 1);
    rc["fuel_lb"] = M * P * (V - 1);
  } else {
    rc["cap"] = M * V * (V - 1);
  }
  int budget = 0;
  for (int m = 0; m < M; ++m) {
    if (inst.distance_budget[m] != kUnbounded) ++budget;
  }
  if (budget > 0) rc["budget"] = budget;
  return rc;
}

double analytic_sim_expectation(const Instance& inst,
                                const std::vector<std::vector<NodeId>>& orders,
                                const std::vector<double>& fail_prob,
                                bool per_leg) {
  double total = 0.0;
  for (int m = 0; m < inst.num_uvs; ++m) {
    const double p = fail_prob[m];
    const auto& order = orders[m];
    if (order.empty()) continue;
    if (!per_leg) {
      for (NodeId v : order) total += (1.0 - p) * inst.incentive(m, v);
      continue;
    }
    if (p >= 1.0) continue;
    const double s = static_cast<double>(order.size());
    const double survive = std::exp(std::log1p(-p) / s);  // 1 - q
    double chance = 1.0;
    for (NodeId v : order) {
      chance *= survive;
      total += chance * inst.incentive(m, v);
    }
  }
  return total;
}

}  // namespace sva::oracle
