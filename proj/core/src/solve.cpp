#include "sva/solve.hpp"

namespace sva {

namespace {

CutCallback make_sec_callback(const Instance& inst, const VariableIndex& vidx) {
  return [&inst, vidx](const std::vector<double>& sol) {
    std::vector<Cut> cuts;
    const int V = inst.V();
    for (int m = 0; m < inst.num_uvs; ++m) {
      std::vector<double> y_uv(static_cast<size_t>(V) * V, 0.0);
      std::vector<double> z_uv(inst.num_stations, 0.0);
      for (NodeId i = 0; i < V; ++i) {
        for (NodeId j = 0; j < V; ++j) {
          if (i != j) y_uv[i * V + j] = sol[vidx.y(m, i, j)];
        }
      }
      for (int r = 1; r < inst.num_stations; ++r) z_uv[r] = sol[vidx.z(m, r)];
      for (const SecCut& sc : separate_sec(inst, y_uv, z_uv, m)) {
        cuts.push_back({sec_cut_row(vidx, sc), CutKind::kSubTour,
                        "sec[" + std::to_string(m) + "]"});
      }
    }
    return cuts;
  };
}

SolveOutcome solve_built(const Instance& inst, BuiltModel&& model,
                         const SolverOptions& options) {
  SolveOutcome out;
  const CutCallback cb = make_sec_callback(inst, model.vidx);
  MipResult mr = solve_mip(model.mip, cb, options.limits);
  out.stats = mr.stats;
  if (mr.stats.has_incumbent) {
    out.has_plan = true;
    out.plan = extract_plan(inst, model.vidx, mr.x);
    out.plan.objective_lb = mr.stats.incumbent;
    out.plan.objective_ub = mr.stats.best_bound;
  }
  return out;
}

}  // namespace

SolveOutcome solve_instance(const Instance& inst, const ScenarioSet& scen,
                            SolveMode mode, const SolverOptions& options) {
  if (mode == SolveMode::kLshaped) {
    LshapedOptions lo;
    lo.epsilon = options.epsilon;
    lo.multi_cut = options.multi_cut;
    lo.formulation = options.formulation;
    lo.master_limits = options.limits;
    lo.max_iterations = options.max_iterations;
    lo.time_seconds = options.limits.time_seconds;
    LshapedResult lr = solve_lshaped(inst, scen, lo);
    SolveOutcome out;
    out.has_plan = true;
    out.plan = lr.plan;
    out.stats = lr.stats;
    out.log = std::move(lr.log);
    return out;
  }
  const SecondStageKind kind = mode == SolveMode::kDep
                                   ? SecondStageKind::kBinary
                                   : SecondStageKind::kRelaxed;
  return solve_built(inst, build_dep(inst, scen, kind, options.formulation),
                     options);
}

SolveOutcome solve_deterministic(const Instance& inst,
                                 const SolverOptions& options) {
  return solve_built(inst, build_first_stage(inst, options.formulation),
                     options);
}

}  // namespace sva
