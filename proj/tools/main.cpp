#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bench.hpp"
#include "commands.hpp"

namespace cc = convergecast::cli;

namespace {

void add_gls_flags(CLI::App* app, convergecast::GlsParams& p, std::optional<std::int32_t>& k_max) {
  app->add_option("--pop-size", p.pop_size, "population size")->capture_default_str();
  app->add_option("--offsp-size", p.offsp_size, "offspring per generation")->capture_default_str();
  app->add_option("--fp-it-count", p.fp_it_count, "failure budget during population init")->capture_default_str();
  app->add_option("--sp-proportion", p.sp_proportion, "share of shortest-path trees in the initial population")
      ->capture_default_str();
  app->add_option("--pm", p.p_m, "mutation probability")->capture_default_str();
  app->add_option("--pls", p.p_ls, "local search probability")->capture_default_str();
  app->add_option("--k-max", k_max, "largest mutation size (default n/3)");
  app->add_option("--max-generations", p.max_generations, "generation cap")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-latency aggregation convergecast solver"};
  app.require_subcommand(1);
  app.fallthrough();

  cc::GlobalOptions global;
  std::int64_t sink = -1;
  app.add_option("--seed", global.seed, "base random seed")->capture_default_str();
  app.add_option("--sink", sink, "override the sink vertex");
  app.add_option("--jobs", global.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--time-limit", global.time_limit_s, "GLS wall clock limit in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  cc::GenRequest gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a graph");
  gen_cmd->add_option("family", gen.family, "ccc | bf | se | random | waxman | path | star | cycle | complete")
      ->required();
  gen_cmd->add_option("size", gen.size, "dimension for ccc/bf/se, vertex count otherwise")->required();
  gen_cmd->add_option("--p", gen.p, "edge probability (random)")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha, "Waxman alpha")->capture_default_str();
  gen_cmd->add_option("--beta", gen.beta, "Waxman beta")->capture_default_str();
  gen_cmd->add_option("-o,--out", gen.out, "output file (default stdout)");

  cc::SolveRequest solve;
  std::optional<std::int32_t> solve_k;
  auto* solve_cmd = app.add_subcommand("solve", "build a tree and a conflict-free schedule");
  solve_cmd->add_option("graph", solve.graph, "graph file")->required();
  solve_cmd->add_option("--method", solve.method, "gls | exact | spt")->capture_default_str();
  solve_cmd->add_option("--seeds", solve.seeds, "independent GLS runs, best kept")->capture_default_str();
  solve_cmd->add_option("-o,--out", solve.out, "schedule file (default stdout)");
  add_gls_flags(solve_cmd, solve.params, solve_k);

  std::string bound_graph;
  auto* bound_cmd = app.add_subcommand("bound", "print the lower bound: lb lb_log lb_ecc");
  bound_cmd->add_option("graph", bound_graph, "graph file")->required();

  cc::CheckRequest check;
  auto* check_cmd = app.add_subcommand("check", "validate a schedule and optionally an IP assignment");
  check_cmd->add_option("graph", check.graph, "graph file")->required();
  check_cmd->add_option("schedule", check.schedule, "schedule file");
  check_cmd->add_option("--model", check.model, "ip1 | ip2");
  check_cmd->add_option("--assignment", check.assignment, "variable assignment file");
  check_cmd->add_option("--write-assignment", check.write_assignment, "write the encoded assignment here");

  cc::EmitRequest emit;
  auto* emit_cmd = app.add_subcommand("emit", "write an integer program in LP format");
  emit_cmd->add_option("formulation", emit.formulation, "ip1 | ip2")->required();
  emit_cmd->add_option("graph", emit.graph, "graph file")->required();
  emit_cmd->add_option("-o,--out", emit.out, "LP file (default stdout)");

  cc::BenchRequest bench;
  std::optional<std::int32_t> bench_k;
  std::string methods = "lb,exact,spt,gls";
  auto* bench_cmd = app.add_subcommand("bench", "run a suite and append results to a CSV file");
  bench_cmd->add_option("suite", bench.suite, "e.g. \"se:3..5;ccc:3;random:10:0.6:20\"")->required();
  bench_cmd->add_option("-o,--out", bench.out, "CSV file, resumed if present")->required();
  bench_cmd->add_option("--methods", methods, "comma separated subset of lb,exact,spt,gls")->capture_default_str();
  bench_cmd->add_option("--seeds", bench.seeds, "GLS seeds per instance")->capture_default_str();
  add_gls_flags(bench_cmd, bench.params, bench_k);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cc::kUsage;
  }
  if (sink >= 0) global.sink = static_cast<convergecast::Vertex>(sink);
  solve.params.k_max = solve_k;
  bench.params.k_max = bench_k;

  if (*gen_cmd) return cc::cmd_gen(gen, global, std::cout, std::cerr);
  if (*solve_cmd) return cc::cmd_solve(solve, global, std::cout, std::cerr);
  if (*bound_cmd) return cc::cmd_bound(bound_graph, global, std::cout, std::cerr);
  if (*check_cmd) return cc::cmd_check(check, global, std::cout, std::cerr);
  if (*emit_cmd) return cc::cmd_emit(emit, global, std::cout, std::cerr);
  bench.methods.clear();
  std::istringstream in(methods);
  for (std::string m; std::getline(in, m, ',');) {
    if (!m.empty()) bench.methods.push_back(m);
  }
  return cc::cmd_bench(bench, global, std::cout, std::cerr);
}
