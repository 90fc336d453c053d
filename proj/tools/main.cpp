// Copyright 2026 The allocflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "allocflow/allocflow.hpp"

namespace {

using allocflow::Allocation;
using allocflow::Error;
using allocflow::ErrorCode;
using allocflow::ProblemInstance;
using allocflow::SolverConfig;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParse, "cannot open '" + path + "'");
  }
  return in;
}

ProblemInstance load_instance(const std::string& matrix_path,
                              const std::string& capacity_spec,
                              std::int64_t cost_scale) {
  auto in = open_or_throw(matrix_path);
  ProblemInstance instance;
  instance.outcomes = allocflow::read_outcome_matrix(in);
  instance.cost_scale = cost_scale;
  instance.capacities = allocflow::parse_capacity_spec(
      capacity_spec, instance.num_treatments());
  allocflow::require_valid(instance);
  return instance;
}

Allocation load_baseline(const std::string& path, int num_recipients) {
  auto in = open_or_throw(path);
  Allocation baseline;
  baseline.assignment = allocflow::read_baseline(in);
  if (static_cast<int>(baseline.assignment.size()) != num_recipients) {
    throw Error(ErrorCode::kParse,
                "baseline lists " + std::to_string(baseline.assignment.size()) +
                    " recipients, matrix has " +
                    std::to_string(num_recipients));
  }
  return baseline;
}

allocflow::CycleRule parse_rule(const std::string& rule) {
  if (rule == "bellman-ford") return allocflow::CycleRule::kBellmanFord;
  if (rule == "min-mean") return allocflow::CycleRule::kMinMean;
  throw Error(ErrorCode::kParse, "rule must be bellman-ford or min-mean");
}

int default_thread_count() {
  if (const char* env = std::getenv("ALLOCFLOW_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

void print_assignment_text(std::ostream& out,
                           const allocflow::SolveReport& report) {
  out << "assignment:";
  for (int j : report.allocation.assignment) out << ' ' << j;
  out << '\n';
  out << "total: " << report.value.total << '\n';
  out << "mean: " << report.value.mean << '\n';
  out << "iterations: " << report.iterations << '\n';
  out << "quantization_bound: " << report.quantization_bound << '\n';
}

struct SolveOptions {
  std::string input;
  std::string capacity_spec;
  std::string baseline_path;
  std::string rule = "min-mean";
  std::string dump_network_path;
  std::string trace_path;
  std::int64_t cost_scale = allocflow::kDefaultCostScale;
  bool json = false;
};

void add_solver_flags(CLI::App* cmd, SolveOptions* options) {
  cmd->add_option("-i,--input", options->input, "outcome matrix CSV")
      ->required();
  cmd->add_option("-c,--capacity,--capacities", options->capacity_spec,
                  "uniform capacity or comma-separated per-treatment list")
      ->required();
  cmd->add_option("--cost-scale", options->cost_scale,
                  "integer scale applied to outcomes before rounding")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rule", options->rule,
                  "cycle selection rule: bellman-ford or min-mean");
  cmd->add_flag("--json", options->json, "machine-readable output");
  cmd->add_option("--dump-network", options->dump_network_path,
                  "write the DIMACS-like network dump to this file");
  cmd->add_option("--trace", options->trace_path,
                  "write one CSV line per canceled cycle to this file");
}

SolverConfig make_config(const SolveOptions& options,
                         std::ofstream* trace_out) {
  SolverConfig config;
  config.rule = parse_rule(options.rule);
  if (!options.trace_path.empty()) {
    trace_out->open(options.trace_path);
    if (!*trace_out) {
      throw Error(ErrorCode::kParse,
                  "cannot open '" + options.trace_path + "'");
    }
    *trace_out << "iteration,cycle_length,cycle_cost,delta\n";
    config.trace = [trace_out](const allocflow::IterationTrace& t) {
      *trace_out << t.iteration << ',' << t.cycle_length << ',' << t.cycle_cost
                 << ',' << t.delta << '\n';
    };
  }
  return config;
}

void maybe_dump_network(const SolveOptions& options,
                        const ProblemInstance& instance) {
  if (options.dump_network_path.empty()) return;
  std::ofstream out(options.dump_network_path);
  if (!out) {
    throw Error(ErrorCode::kParse,
                "cannot open '" + options.dump_network_path + "'");
  }
  allocflow::write_dimacs(allocflow::build_network(instance), out);
}

int run_solve(const SolveOptions& options) {
  const ProblemInstance instance =
      load_instance(options.input, options.capacity_spec, options.cost_scale);
  maybe_dump_network(options, instance);
  std::ofstream trace_out;
  const auto report = allocflow::solve(instance, make_config(options, &trace_out));
  if (options.json) {
    std::cout << allocflow::solve_report_json(report).dump(2) << '\n';
  } else {
    print_assignment_text(std::cout, report);
  }
  return kExitOk;
}

int run_pareto(const SolveOptions& options) {
  const ProblemInstance instance =
      load_instance(options.input, options.capacity_spec, options.cost_scale);
  const Allocation baseline =
      load_baseline(options.baseline_path, instance.num_recipients());
  maybe_dump_network(options, instance);
  std::ofstream trace_out;
  const auto report =
      allocflow::solve_pareto(instance, baseline, make_config(options, &trace_out));
  if (options.json) {
    std::cout << allocflow::pareto_report_json(report, instance, baseline).dump(2)
              << '\n';
  } else {
    print_assignment_text(std::cout, report);
    std::cout << "delta:";
    for (std::size_t i = 0; i < report.allocation.assignment.size(); ++i) {
      std::cout << ' '
                << instance.outcomes[i][report.allocation.assignment[i]] -
                       instance.outcomes[i][baseline.assignment[i]];
    }
    std::cout << '\n';
  }
  return kExitOk;
}

int run_compare(const SolveOptions& options) {
  const ProblemInstance instance =
      load_instance(options.input, options.capacity_spec, options.cost_scale);
  const Allocation actual =
      load_baseline(options.baseline_path, instance.num_recipients());
  std::ofstream trace_out;
  const auto comparison = allocflow::compare_mechanisms(
      instance, actual, {}, make_config(options, &trace_out));
  if (options.json) {
    std::cout << allocflow::mechanism_comparison_json(comparison).dump(2)
              << '\n';
  } else {
    std::cout << "mechanism mean total\n";
    std::cout << "actual " << comparison.actual.mean << ' '
              << comparison.actual.total << '\n';
    std::cout << "greedy " << comparison.greedy.mean << ' '
              << comparison.greedy.total << '\n';
    std::cout << "optimal " << comparison.optimal.mean << ' '
              << comparison.optimal.total << '\n';
    std::cout << "pareto " << comparison.pareto.mean << ' '
              << comparison.pareto.total << '\n';
  }
  return kExitOk;
}

int run_permtest(const std::string& input, std::int64_t replicates,
                 std::uint64_t seed, const std::string& weighting, bool json,
                 int threads) {
  auto in = open_or_throw(input);
  const auto data = allocflow::read_grouped_outcomes(in);
  const auto mode = [&] {
    if (weighting == "pooled-pairs") return allocflow::PairWeighting::kPooledPairs;
    if (weighting == "per-group") return allocflow::PairWeighting::kPerGroup;
    throw Error(ErrorCode::kParse,
                "weighting must be pooled-pairs or per-group");
  }();
  const auto report =
      allocflow::permutation_test(data, replicates, seed, mode, threads);
  if (json) {
    std::cout << allocflow::permutation_report_json(report).dump(2) << '\n';
  } else {
    std::cout << allocflow::permutation_report_text(report);
  }
  return kExitOk;
}

int run_gen(int n1, int n2, double heterogeneity, std::uint64_t seed,
            const std::string& capacity_spec, const std::string& output) {
  if (n1 <= 0 || n2 < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "n1 must be positive and n2 non-negative");
  }
  if (!capacity_spec.empty()) {
    // Validated for completeness; capacities are not part of the matrix file.
    const auto capacities = allocflow::parse_capacity_spec(capacity_spec, n1);
    for (auto m : capacities) {
      if (m < 0) {
        throw Error(ErrorCode::kNegativeCapacity, "capacity must be >= 0");
      }
    }
  }
  const auto outcomes =
      allocflow::generate_outcomes(n1, n2, heterogeneity, seed);
  if (output.empty()) {
    allocflow::write_outcome_matrix(outcomes, std::cout);
  } else {
    std::ofstream out(output);
    if (!out) throw Error(ErrorCode::kParse, "cannot open '" + output + "'");
    allocflow::write_outcome_matrix(outcomes, out);
  }
  return kExitOk;
}

int run_bench(int n1, const std::vector<int>& n2_grid, int reps,
              const std::string& rules, double heterogeneity,
              std::uint64_t seed, const std::string& output) {
  if (n1 <= 0 || n2_grid.empty() || reps <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad benchmark grid");
  }
  std::vector<allocflow::CycleRule> rule_list;
  if (rules == "both") {
    rule_list = {allocflow::CycleRule::kMinMean,
                 allocflow::CycleRule::kBellmanFord};
  } else {
    rule_list = {parse_rule(rules)};
  }
  std::ostringstream table;
  table << "n1,n2,capacity,rule,rep,seed,iterations,wall_ms,total\n";
  for (int n2 : n2_grid) {
    if (n2 < 0) throw Error(ErrorCode::kInvalidArgument, "n2 must be >= 0");
    for (int rep = 0; rep < reps; ++rep) {
      const std::uint64_t instance_seed = seed + 1000003ULL * rep + n2;
      const auto instance = allocflow::generate_instance(
          n1, n2, heterogeneity, instance_seed);
      for (auto rule : rule_list) {
        SolverConfig config;
        config.rule = rule;
        const auto start = std::chrono::steady_clock::now();
        const auto report = allocflow::solve(instance, config);
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
        table << n1 << ',' << n2 << ',' << instance.capacities.front() << ','
              << (rule == allocflow::CycleRule::kMinMean ? "min-mean"
                                                         : "bellman-ford")
              << ',' << rep << ',' << instance_seed << ','
              << report.iterations << ',' << elapsed << ','
              << report.value.total << '\n';
      }
    }
  }
  if (output.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(output);
    if (!out) throw Error(ErrorCode::kParse, "cannot open '" + output + "'");
    out << table.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact treatment allocation under capacity constraints via integer "
      "minimum-cost flow"};
  app.require_subcommand(1);

  SolveOptions solve_options;
  auto* solve_cmd =
      app.add_subcommand("solve", "optimal allocation for an outcome matrix");
  add_solver_flags(solve_cmd, &solve_options);

  SolveOptions pareto_options;
  auto* pareto_cmd = app.add_subcommand(
      "pareto", "optimal allocation that leaves no recipient worse off");
  add_solver_flags(pareto_cmd, &pareto_options);
  pareto_cmd
      ->add_option("-b,--baseline", pareto_options.baseline_path,
                   "baseline allocation file, one treatment index per line")
      ->required();

  SolveOptions compare_options;
  auto* compare_cmd = app.add_subcommand(
      "compare", "mean outcomes under actual, greedy, optimal and Pareto");
  add_solver_flags(compare_cmd, &compare_options);
  compare_cmd
      ->add_option("-b,--baseline", compare_options.baseline_path,
                   "actual allocation file, one treatment index per line")
      ->required();

  std::string permtest_input;
  std::int64_t permtest_replicates = 1000;
  std::uint64_t permtest_seed = 0;
  std::string permtest_weighting = "pooled-pairs";
  bool permtest_json = false;
  int permtest_threads = default_thread_count();
  auto* permtest_cmd = app.add_subcommand(
      "permtest", "permutation test of within-group arm differences");
  permtest_cmd
      ->add_option("-i,--input", permtest_input,
                   "grouped CSV with columns group,arm,outcome")
      ->required();
  permtest_cmd->add_option("-r,--replicates", permtest_replicates,
                           "number of permutation replicates");
  permtest_cmd->add_option("-s,--seed", permtest_seed, "RNG seed");
  permtest_cmd->add_option("--weighting", permtest_weighting,
                           "pooled-pairs or per-group");
  permtest_cmd->add_flag("--json", permtest_json, "machine-readable output");
  permtest_cmd->add_option("--threads", permtest_threads,
                           "worker threads (default: ALLOCFLOW_THREADS or 1)");

  int gen_n1 = 0;
  int gen_n2 = 0;
  double gen_heterogeneity = 0.5;
  std::uint64_t gen_seed = 0;
  std::string gen_capacity;
  std::string gen_output;
  auto* gen_cmd =
      app.add_subcommand("gen", "generate a synthetic outcome matrix");
  gen_cmd->add_option("--n1", gen_n1, "number of treatments")->required();
  gen_cmd->add_option("--n2", gen_n2, "number of recipients")->required();
  gen_cmd->add_option("--heterogeneity", gen_heterogeneity,
                      "interaction share in [0, 1]; 0 makes greedy optimal");
  gen_cmd->add_option("--seed", gen_seed, "RNG seed");
  gen_cmd->add_option("--capacity", gen_capacity,
                      "capacity spec validated against n1");
  gen_cmd->add_option("-o,--output", gen_output,
                      "output file (default stdout)");

  int bench_n1 = 10;
  std::vector<int> bench_n2_grid;
  int bench_reps = 3;
  std::string bench_rules = "both";
  double bench_heterogeneity = 1.0;
  std::uint64_t bench_seed = 0;
  std::string bench_output;
  auto* bench_cmd = app.add_subcommand(
      "bench", "timing table over generated instances");
  bench_cmd->add_option("--n1", bench_n1, "number of treatments");
  bench_cmd->add_option("--n2", bench_n2_grid, "recipient counts to sweep")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--reps", bench_reps, "instances per grid cell");
  bench_cmd->add_option("--rules", bench_rules,
                        "min-mean, bellman-ford, or both");
  bench_cmd->add_option("--heterogeneity", bench_heterogeneity,
                        "interaction share in [0, 1]");
  bench_cmd->add_option("--seed", bench_seed, "base RNG seed");
  bench_cmd->add_option("-o,--output", bench_output,
                        "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_options);
    if (pareto_cmd->parsed()) return run_pareto(pareto_options);
    if (compare_cmd->parsed()) return run_compare(compare_options);
    if (permtest_cmd->parsed()) {
      return run_permtest(permtest_input, permtest_replicates, permtest_seed,
                          permtest_weighting, permtest_json, permtest_threads);
    }
    if (gen_cmd->parsed()) {
      return run_gen(gen_n1, gen_n2, gen_heterogeneity, gen_seed, gen_capacity,
                     gen_output);
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench_n1, bench_n2_grid, bench_reps, bench_rules,
                       bench_heterogeneity, bench_seed, bench_output);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return (e.code() == ErrorCode::kInfeasible ||
            e.code() == ErrorCode::kInfeasibleBaseline)
               ? kExitInfeasible
               : kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
