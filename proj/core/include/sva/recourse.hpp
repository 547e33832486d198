#pragma once

#include <vector>

#include "sva/model.hpp"

namespace sva {

// Optimal duals of one recourse LP, in fixed row order:
//   pi_flow:   per (uv, poi)        — fuel-flow feasibility rows
//   pi_link:   per (uv, edge id)    — v <= y coupling rows
//   pi_depart: per (uv, station r, node i != r) — station-departure rows
struct RecourseDuals {
  std::vector<double> pi_flow;
  std::vector<double> pi_link;
  std::vector<double> pi_depart;
};

struct RecourseValue {
  double value = 0.0;          // nonpositive
  std::vector<double> v;       // num_uvs*V*V, same layout as Plan.edge_use
  RecourseDuals duals;
};

// Thrown when the recourse LP is infeasible, which certifies a first-stage
// contract violation upstream (the model has relatively complete recourse).
class RecourseContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves the scenario recourse LP (relaxed second stage: v >= 0 with
// v <= y rows; the box bound 1 is implied by y <= 1) for fixed first-stage
// (x, y). Returns the optimal value, the v vector and the duals. The dual
// objective is homogeneous in (x, y), which is what makes the optimality
// cuts constant-free. Defined for fractional y as well (the relaxation is
// an LP in (x, y)); integral y is the Theorem-style case where v lands in
// {0, 1}.
RecourseValue solve_recourse(const Instance& inst,
                             const std::vector<double>& x,  // num_uvs*V*V
                             const std::vector<double>& y,  // num_uvs*V*V
                             const Scenario& scenario);

RecourseValue solve_recourse(const Instance& inst,
                             const std::vector<double>& x,
                             const std::vector<uint8_t>& y,
                             const Scenario& scenario);

RecourseValue solve_recourse(const Instance& inst, const Plan& plan,
                             const Scenario& scenario);

// Closed form implied by the integrality of the relaxed recourse:
//   -(sum_m (1 - alpha_m) * first-stage incentive of m).
double recourse_closed_form(const Instance& inst,
                            const std::vector<uint8_t>& y,
                            const Scenario& scenario);
double recourse_closed_form(const Instance& inst, const Plan& plan,
                            const Scenario& scenario);

// True iff every v value is within tol::kIntegrality of {0, 1}.
bool check_integrality(const RecourseValue& rv);

}  // namespace sva
