#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "convergecast/gls.hpp"
#include "convergecast/graph.hpp"

namespace convergecast::cli {

enum ExitCode : int { kOk = 0, kInfeasible = 1, kUsage = 2, kSizeCap = 3 };

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::optional<Vertex> sink;
  int jobs = 1;
  double time_limit_s = 1000.0;
};

struct GenRequest {
  std::string family;  // ccc | bf | se | random | waxman | path | star | cycle | complete
  std::int64_t size = 0;
  double p = 0.5;
  double alpha = 0.4;
  double beta = 0.1;
  std::string out;  // empty: graph text goes to stdout
};

struct SolveRequest {
  std::string graph;
  std::string method = "gls";  // gls | exact | spt
  int seeds = 1;
  GlsParams params;
  std::string out;  // empty: schedule text goes to stdout
};

struct CheckRequest {
  std::string graph;
  std::string schedule;
  std::string model;       // empty | ip1 | ip2
  std::string assignment;  // evaluate this assignment file instead of encoding the schedule
  std::string write_assignment;
};

struct EmitRequest {
  std::string graph;
  std::string formulation;  // ip1 | ip2
  std::string out;
};

/// Builds a graph for `family` with the given size parameter; throws Error on bad input.
Graph generate(const GenRequest& req, const GlobalOptions& global);

/// Loads a graph file and applies the --sink override.
Graph load_for_cli(const std::string& path, const GlobalOptions& global);

int cmd_gen(const GenRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err);
int cmd_bound(const std::string& graph, const GlobalOptions& global, std::ostream& out, std::ostream& err);
int cmd_check(const CheckRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err);
int cmd_emit(const EmitRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err);

/// Outcome of one solver invocation, shared by `solve` and `bench`.
struct SolveOutcome {
  AggregationTree tree;
  Schedule schedule;
  std::int32_t latency = 0;
  std::int32_t generations = 0;
  std::int64_t elapsed_ms = 0;
  std::uint64_t seed = 0;
  std::int32_t initial_population = 0;
};

/// Runs one method on one seed and re-validates the schedule; throws SizeCapError
/// for `exact` above the cap and std::logic_error if the schedule fails its check.
SolveOutcome solve_once(const Graph& g, const std::string& method, GlsParams params, std::uint64_t seed,
                        const GlobalOptions& global);

}  // namespace convergecast::cli
