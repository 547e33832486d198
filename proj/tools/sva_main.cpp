// Command line driver: generate -> solve -> simulate -> vss -> export ->
// bench. Exit codes: 0 optimal/done, 2 limit reached (incumbent may exist),
// 3 infeasible, 64 usage error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sva/instance_gen.hpp"
#include "sva/json_io.hpp"
#include "sva/route_export.hpp"
#include "sva/simulator.hpp"
#include "sva/solve.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLimit = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUsage = 64;

sva::SolveMode parse_mode(const std::string& mode) {
  if (mode == "dep") return sva::SolveMode::kDep;
  if (mode == "dep-relaxed") return sva::SolveMode::kDepRelaxed;
  if (mode == "lshaped") return sva::SolveMode::kLshaped;
  throw CLI::ValidationError("--mode", "expected dep, dep-relaxed or lshaped");
}

struct ScenarioFlags {
  std::string scenarios_file;
  std::vector<double> avail_percent;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--scenarios", scenarios_file,
                    "Scenario set JSON file");
    cmd->add_option("--avail", avail_percent,
                    "Per-UV availability percentages (e.g. --avail 100 75)")
        ->delimiter(',');
  }

  sva::ScenarioSet resolve(const sva::Instance& inst) const {
    if (!scenarios_file.empty() && !avail_percent.empty()) {
      throw CLI::ValidationError("--scenarios", "give either --scenarios or --avail, not both");
    }
    if (!scenarios_file.empty()) {
      return sva::scenarios_from_json(sva::read_file(scenarios_file));
    }
    if (!avail_percent.empty()) {
      if (static_cast<int>(avail_percent.size()) != inst.num_uvs) {
        throw CLI::ValidationError("--avail", "need one percentage per UV");
      }
      return sva::build_scenarios(avail_percent);
    }
    throw CLI::ValidationError("--scenarios", "scenarios required: --scenarios FILE or --avail P1,P2,...");
  }
};

int exit_code_for(const sva::SolveStats& stats) {
  switch (stats.status) {
    case sva::MipStatus::kOptimal: return kExitOk;
    case sva::MipStatus::kLimit: return kExitLimit;
    case sva::MipStatus::kInfeasible: return kExitInfeasible;
    case sva::MipStatus::kUnbounded: return kExitInfeasible;
  }
  return kExitLimit;
}

int cmd_generate(const sva::GenSpec& spec, const std::string& spec_json,
                 const std::string& out_path) {
  sva::GenSpec gs = spec;
  if (!spec_json.empty()) {
    // GenSpec as a JSON file mirrors the flags one to one.
    const auto j = nlohmann::json::parse(sva::read_file(spec_json));
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") gs.seed = value.get<uint64_t>();
      else if (key == "n_pois") gs.n_pois = value.get<int>();
      else if (key == "n_stations") gs.n_stations = value.get<int>();
      else if (key == "grid_extent") gs.grid_extent = value.get<double>();
      else if (key == "fuel_multiplier") gs.fuel_multiplier = value.get<double>();
      else if (key == "num_uvs") gs.num_uvs = value.get<int>();
      else if (key == "incentive_max") gs.incentive_max = value.get<std::vector<double>>();
      else if (key == "zero_incentive_fraction") gs.zero_incentive_fraction = value.get<double>();
      else if (key == "round_costs_to_int") gs.round_costs_to_int = value.get<bool>();
      else throw std::invalid_argument("genspec: unknown field '" + key + "'");
    }
  }
  const sva::Instance inst = sva::generate_instance(gs);
  sva::write_file(out_path, sva::instance_to_json(inst));
  const double lambda = sva::max_pairwise_distance(inst.coords);
  std::cout << "lambda " << lambda << "\n";
  for (int m = 0; m < inst.num_uvs; ++m) {
    std::cout << "F[" << m << "] " << inst.fuel_capacity[m] << "\n";
  }
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, const ScenarioFlags& scen_flags,
              const std::string& mode_name, double eps, double time_limit,
              double gap_limit, bool no_strengthen, bool aggregate_depot,
              bool multi_cut, bool progress, const std::string& out_path,
              const std::string& stats_path) {
  const sva::Instance inst =
      sva::instance_from_json(sva::read_file(instance_path));
  const sva::ScenarioSet scen = scen_flags.resolve(inst);

  sva::SolverOptions opt;
  opt.epsilon = eps;
  opt.limits.time_seconds = time_limit;
  opt.limits.rel_gap = gap_limit;
  opt.formulation.strengthen = !no_strengthen;
  opt.formulation.per_uv_depot = !aggregate_depot;
  opt.multi_cut = multi_cut;
  if (progress) opt.limits.progress = &std::cerr;

  const sva::SolveOutcome out =
      sva::solve_instance(inst, scen, parse_mode(mode_name), opt);

  const std::string stats_json = sva::stats_to_json(out.stats, out.log);
  if (!stats_path.empty()) sva::write_file(stats_path, stats_json);
  std::cout << stats_json;
  if (out.has_plan) {
    sva::write_file(out_path, sva::plan_to_json(out.plan));
    std::cout << "wrote " << out_path << "\n";
  }
  return exit_code_for(out.stats);
}

int cmd_simulate(const std::string& instance_path, const std::string& plan_path,
                 std::vector<double> failure_percent, long reps, uint64_t seed,
                 const std::string& semantics, int jobs,
                 const std::string& out_path) {
  const sva::Instance inst =
      sva::instance_from_json(sva::read_file(instance_path));
  const sva::Plan plan = sva::plan_from_json(sva::read_file(plan_path));
  sva::SimConfig cfg;
  for (double p : failure_percent) cfg.failure_probability.push_back(p / 100.0);
  cfg.replications = reps;
  cfg.seed = seed;
  cfg.jobs = jobs;
  if (semantics == "start") {
    cfg.semantics = sva::FailureSemantics::kAtStart;
  } else if (semantics == "per-leg") {
    cfg.semantics = sva::FailureSemantics::kPerLeg;
  } else {
    throw CLI::ValidationError("--semantics", "expected start or per-leg");
  }
  sva::SimReport rep = sva::simulate_mission(inst, plan, cfg);
  rep.plan_provenance = "file:" + plan_path;
  if (!out_path.empty()) sva::write_file(out_path, sva::sim_report_to_json(rep));
  std::printf("replications %ld\nmean %.6f\nstddev %.6f\n", rep.replications,
              rep.mean, rep.stddev);
  for (size_t m = 0; m < rep.per_uv_mean.size(); ++m) {
    std::printf("uv%zu mean %.6f\n", m, rep.per_uv_mean[m]);
  }
  return kExitOk;
}

void print_vss_table(const std::vector<std::string>& labels,
                     const std::vector<sva::VssReport>& reports) {
  std::printf("%-10s %14s %14s %10s %10s\n", "scenario", "E[TS]", "E[D]",
              "VSS", "VSS%");
  for (size_t i = 0; i < reports.size(); ++i) {
    const sva::VssReport& r = reports[i];
    std::printf("%-10s %14.4f %14.4f %10.4f %9.2f%%\n", labels[i].c_str(),
                r.expected_stochastic, r.expected_deterministic, r.vss_abs,
                r.vss_pct);
  }
}

int cmd_vss(const std::string& instance_path, const ScenarioFlags& scen_flags,
            const std::string& mode_name, double eps, double time_limit,
            long reps, uint64_t seed, int jobs, bool sweep,
            const std::string& out_path) {
  const sva::Instance inst =
      sva::instance_from_json(sva::read_file(instance_path));
  sva::VssConfig cfg;
  cfg.mode = parse_mode(mode_name);
  cfg.solver.epsilon = eps;
  cfg.solver.limits.time_seconds = time_limit;
  cfg.sim.replications = reps;
  cfg.sim.seed = seed;
  cfg.sim.jobs = jobs;
  cfg.sim.semantics = sva::FailureSemantics::kAtStart;

  if (sweep) {
    // S1..S4: the last UV at 100 / 75 / 25 / 0 percent availability.
    const double cases[4] = {100.0, 75.0, 25.0, 0.0};
    std::vector<sva::VssReport> reports;
    std::vector<std::string> labels;
    std::ostringstream all;
    all << "[";
    for (int c = 0; c < 4; ++c) {
      std::vector<double> percent(inst.num_uvs, 100.0);
      percent.back() = cases[c];
      const sva::ScenarioSet scen = sva::build_scenarios(percent);
      reports.push_back(sva::compute_vss(inst, scen, cfg));
      labels.push_back("S" + std::to_string(c + 1));
      if (c) all << ",";
      all << sva::vss_report_to_json(reports.back());
    }
    all << "]\n";
    if (!out_path.empty()) sva::write_file(out_path, all.str());
    print_vss_table(labels, reports);
    return kExitOk;
  }

  const sva::ScenarioSet scen = scen_flags.resolve(inst);
  const sva::VssReport rep = sva::compute_vss(inst, scen, cfg);
  if (!out_path.empty()) sva::write_file(out_path, sva::vss_report_to_json(rep));
  print_vss_table({"-"}, {rep});
  return kExitOk;
}

int cmd_export(const std::string& instance_path, const std::string& plan_path,
               const std::string& format, const std::string& out_path) {
  const sva::Instance inst =
      sva::instance_from_json(sva::read_file(instance_path));
  const sva::Plan plan = sva::plan_from_json(sva::read_file(plan_path));
  const std::string rendered =
      sva::export_routes(inst, plan, sva::parse_export_format(format));
  sva::write_file(out_path, rendered);
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_bench(std::vector<int> sizes, int seeds, std::vector<double> mults,
              std::vector<double> avails, const std::string& mode_name,
              double time_limit, uint64_t seed, const std::string& out_path) {
  std::ostringstream csv;
  csv << "pois,stations,mult,seed,avail_pct,mode,status,objective,bound,gap,"
         "runtime_sec,bd_cuts,sec_cuts,nodes\n";
  uint64_t stream = 0;
  for (int n : sizes) {
    for (int s = 0; s < seeds; ++s) {
      for (double mult : mults) {
        sva::GenSpec gs;
        gs.seed = sva::derive_seed(seed, stream++);
        gs.n_pois = n;
        gs.fuel_multiplier = mult;
        const sva::Instance inst = sva::generate_instance(gs);
        for (double avail : avails) {
          std::vector<double> percent(inst.num_uvs, 100.0);
          percent.back() = avail;
          const sva::ScenarioSet scen = sva::build_scenarios(percent);
          sva::SolverOptions opt;
          opt.limits.time_seconds = time_limit;
          const sva::SolveOutcome out =
              sva::solve_instance(inst, scen, parse_mode(mode_name), opt);
          const char* status =
              out.stats.status == sva::MipStatus::kOptimal   ? "optimal"
              : out.stats.status == sva::MipStatus::kLimit   ? "limit"
              : out.stats.status == sva::MipStatus::kInfeasible ? "infeasible"
                                                                : "unbounded";
          csv << n << "," << inst.num_stations - 1 << "," << mult << "," << s
              << "," << avail << "," << mode_name << "," << status << ","
              << out.stats.incumbent << "," << out.stats.best_bound << ","
              << out.stats.rel_gap << "," << out.stats.wall_seconds << ","
              << out.stats.benders_cuts << "," << out.stats.subtour_cuts << ","
              << out.stats.nodes << "\n";
          std::cout << "pois=" << n << " seed=" << s << " mult=" << mult
                    << " avail=" << avail << " -> " << status
                    << " obj=" << out.stats.incumbent
                    << " gap=" << out.stats.rel_gap
                    << " t=" << out.stats.wall_seconds << "s\n";
        }
      }
    }
  }
  if (!out_path.empty()) {
    sva::write_file(out_path, csv.str());
    std::cout << "wrote " << out_path << "\n";
  } else {
    std::cout << csv.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage stochastic UV mission planning: exact solvers and "
               "mission simulation"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a random instance");
  sva::GenSpec gs;
  std::string gen_out = "instance.json", gen_spec_json;
  gen->add_option("--pois", gs.n_pois, "Number of POIs")->required();
  gen->add_option("--mult", gs.fuel_multiplier,
                  "Fuel capacity multiplier (F = mult * lambda)");
  gen->add_option("--seed", gs.seed, "RNG seed");
  gen->add_option("--stations", gs.n_stations, "Refueling stations (1..4)");
  gen->add_option("--uvs", gs.num_uvs, "Number of UVs");
  gen->add_option("--grid", gs.grid_extent, "Grid extent");
  gen->add_option("--inc-max", gs.incentive_max,
                  "Per-UV incentive range upper bounds")->delimiter(',');
  gen->add_option("--zero-frac", gs.zero_incentive_fraction,
                  "Fraction of POIs with zero incentive for UV 0");
  gen->add_flag("--round-int", gs.round_costs_to_int,
                "Floor costs to integers (metric repair applied)");
  gen->add_option("--spec-json", gen_spec_json, "GenSpec as a JSON file");
  gen->add_option("--out", gen_out, "Output instance file");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  std::string solve_instance_path, solve_mode = "lshaped";
  std::string solve_out = "plan.json", solve_stats;
  ScenarioFlags solve_scen;
  double solve_eps = 1e-4, solve_time = 3600.0, solve_gap = 1e-6;
  bool no_strengthen = false, aggregate_depot = false, multi_cut = false,
       solve_progress = false;
  solve->add_option("--instance", solve_instance_path, "Instance JSON file")
      ->required();
  solve_scen.add_to(solve);
  solve->add_option("--mode", solve_mode, "dep | dep-relaxed | lshaped");
  solve->add_option("--eps", solve_eps, "Decomposition termination gap");
  solve->add_option("--time-limit", solve_time, "Time limit in seconds");
  solve->add_option("--gap", solve_gap, "Branch-and-bound relative gap limit");
  solve->add_flag("--no-strengthen", no_strengthen,
                  "Disable the tightened formulation");
  solve->add_flag("--aggregate-depot", aggregate_depot,
                  "Aggregate depot rows (sum over UVs) instead of per UV");
  solve->add_flag("--multi-cut", multi_cut,
                  "One optimality cut per scenario (decomposition)");
  solve->add_flag("--progress", solve_progress,
                  "Progress lines on stderr (machine readable)");
  solve->add_option("--out", solve_out, "Output plan file");
  solve->add_option("--stats", solve_stats, "Also write solver stats JSON here");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a plan under failures");
  std::string sim_instance, sim_plan, sim_semantics = "per-leg";
  std::string sim_out = "sim_report.json";
  std::vector<double> sim_fail; long sim_reps = 10000; uint64_t sim_seed = 0;
  int sim_jobs = 1;
  sim->add_option("--instance", sim_instance, "Instance JSON file")->required();
  sim->add_option("--plan", sim_plan, "Plan JSON file")->required();
  sim->add_option("--failure", sim_fail,
                  "Per-UV failure percentages (e.g. --failure 0 25)")
      ->required()->delimiter(',');
  sim->add_option("--reps", sim_reps, "Replications");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--semantics", sim_semantics,
                  "Failure timing: start | per-leg");
  sim->add_option("--jobs", sim_jobs, "Concurrent replication workers");
  sim->add_option("--out", sim_out, "Output report file");

  // vss
  auto* vss = app.add_subcommand(
      "vss", "Compare stochastic vs deterministic plans");
  std::string vss_instance, vss_mode = "lshaped", vss_out = "vss_report.json";
  ScenarioFlags vss_scen;
  double vss_eps = 1e-4, vss_time = 3600.0;
  long vss_reps = 10000; uint64_t vss_seed = 0; int vss_jobs = 1;
  bool vss_sweep = false;
  vss->add_option("--instance", vss_instance, "Instance JSON file")->required();
  vss_scen.add_to(vss);
  vss->add_option("--mode", vss_mode, "Stochastic solve mode");
  vss->add_option("--eps", vss_eps, "Decomposition termination gap");
  vss->add_option("--time-limit", vss_time, "Per-solve time limit");
  vss->add_option("--reps", vss_reps, "Simulation replications");
  vss->add_option("--seed", vss_seed, "Simulation seed");
  vss->add_option("--jobs", vss_jobs, "Concurrent replication workers");
  vss->add_flag("--sweep", vss_sweep,
                "Run the S1-S4 availability sweep for the last UV");
  vss->add_option("--out", vss_out, "Output report file");

  // export
  auto* exp = app.add_subcommand("export", "Render plan routes");
  std::string exp_instance, exp_plan, exp_format = "dot", exp_out = "routes.dot";
  exp->add_option("--instance", exp_instance, "Instance JSON file")->required();
  exp->add_option("--plan", exp_plan, "Plan JSON file")->required();
  exp->add_option("--format", exp_format, "dot | svg | json");
  exp->add_option("--out", exp_out, "Output file");

  // bench
  auto* bench = app.add_subcommand("bench", "Protocol sweep, CSV output");
  std::vector<int> bench_sizes = {10, 20, 30, 40, 50, 60};
  std::vector<double> bench_mults = {2.25, 2.5, 2.75, 3.0};
  std::vector<double> bench_avails = {75.0, 25.0};
  int bench_seeds = 5;
  std::string bench_mode = "lshaped", bench_out = "bench.csv";
  double bench_time = 3600.0;
  uint64_t bench_seed = 0;
  bench->add_option("--sizes", bench_sizes, "POI counts")->delimiter(',');
  bench->add_option("--seeds-per-size", bench_seeds, "Random instances per cell");
  bench->add_option("--mults", bench_mults, "Fuel multipliers")->delimiter(',');
  bench->add_option("--avail", bench_avails,
                    "Availability settings for the last UV")->delimiter(',');
  bench->add_option("--mode", bench_mode, "Solve mode");
  bench->add_option("--time-limit", bench_time, "Per-run time limit");
  bench->add_option("--seed", bench_seed, "Top-level seed");
  bench->add_option("--out", bench_out, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(gs, gen_spec_json, gen_out);
    if (solve->parsed()) {
      return cmd_solve(solve_instance_path, solve_scen, solve_mode, solve_eps,
                       solve_time, solve_gap, no_strengthen, aggregate_depot,
                       multi_cut, solve_progress, solve_out, solve_stats);
    }
    if (sim->parsed()) {
      return cmd_simulate(sim_instance, sim_plan, sim_fail, sim_reps, sim_seed,
                          sim_semantics, sim_jobs, sim_out);
    }
    if (vss->parsed()) {
      return cmd_vss(vss_instance, vss_scen, vss_mode, vss_eps, vss_time,
                     vss_reps, vss_seed, vss_jobs, vss_sweep, vss_out);
    }
    if (exp->parsed()) {
      return cmd_export(exp_instance, exp_plan, exp_format, exp_out);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_sizes, bench_seeds, bench_mults, bench_avails,
                       bench_mode, bench_time, bench_seed, bench_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
