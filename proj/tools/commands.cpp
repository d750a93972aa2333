#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "convergecast/generators.hpp"
#include "convergecast/ip_model.hpp"
#include "convergecast/oracles.hpp"
#include "convergecast/tree.hpp"

namespace convergecast::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

Vertex vertex_count(std::int64_t size, const char* family) {
  if (size < 1 || size > (1 << 24)) throw Error(std::string(family) + ": size out of range");
  return static_cast<Vertex>(size);
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const SizeCapError& e) {
    err << "error: " << e.what() << '\n';
    return kSizeCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace

Graph generate(const GenRequest& req, const GlobalOptions& global) {
  const auto& f = req.family;
  auto dim = [&] {
    if (req.size < 2 || req.size > 20) throw Error(f + ": dimension must lie in [2, 20]");
    return static_cast<int>(req.size);
  };
  Graph g = [&]() -> Graph {
    if (f == "ccc") return gen_ccc(dim());
    if (f == "bf") return gen_butterfly(dim());
    if (f == "se") return gen_shuffle_exchange(dim());
    if (f == "random") return gen_pure_random(vertex_count(req.size, "random"), req.p, global.seed);
    if (f == "waxman") return gen_waxman(vertex_count(req.size, "waxman"), req.alpha, req.beta, global.seed);
    if (f == "path") return gen_path(vertex_count(req.size, "path"));
    if (f == "star") return gen_star(vertex_count(req.size, "star"));
    if (f == "cycle") return gen_cycle(vertex_count(req.size, "cycle"));
    if (f == "complete") return gen_complete(vertex_count(req.size, "complete"));
    throw Error("unknown family '" + f + "' (expected ccc, bf, se, random, waxman, path, star, cycle, complete)");
  }();
  return global.sink ? g.with_sink(*global.sink) : g;
}

Graph load_for_cli(const std::string& path, const GlobalOptions& global) {
  Graph g = load_graph(path);
  return global.sink ? g.with_sink(*global.sink) : g;
}

SolveOutcome solve_once(const Graph& g, const std::string& method, GlsParams params, std::uint64_t seed,
                        const GlobalOptions& global) {
  const auto start = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.seed = seed;
  if (method == "gls") {
    params.seed = seed;
    RunOptions options;
    options.jobs = global.jobs;
    options.time_limit_ms = static_cast<std::int64_t>(global.time_limit_s * 1000.0);
    auto r = run_gls(g, params, options);
    out.tree = std::move(r.tree);
    out.generations = r.generations;
    out.initial_population = r.initial_population;
  } else if (method == "exact") {
    auto r = broadcast_schedule_exact(g);
    out.tree = std::move(r.tree);
    if (latency(out.tree) != r.latency) throw std::logic_error("exact witness tree misses the optimum");
  } else if (method == "spt") {
    out.tree = spt_tree(g);
  } else {
    throw Error("unknown method '" + method + "' (expected gls, exact or spt)");
  }
  out.schedule = assign_slots(out.tree);
  out.latency = out.schedule.latency;
  auto problems = check_schedule(g, out.tree, out.schedule);
  if (!problems.empty()) throw std::logic_error("internal schedule is infeasible: " + problems.front());
  out.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return out;
}

int cmd_gen(const GenRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Graph g = generate(req, global);
    if (req.out.empty()) {
      out << write_graph(g);
    } else {
      save_graph(g, req.out);
      out << g.n() << ' ' << g.m() << ' ' << g.sink() << '\n';
    }
    return kOk;
  });
}

int cmd_solve(const SolveRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (req.seeds < 1) throw Error("--seeds must be >= 1");
    req.params.validate();
    Graph g = load_for_cli(req.graph, global);
    const int runs = req.method == "gls" ? req.seeds : 1;
    std::optional<SolveOutcome> best;
    std::int64_t total_ms = 0;
    for (int i = 0; i < runs; ++i) {
      auto outcome = solve_once(g, req.method, req.params, global.seed + static_cast<std::uint64_t>(i), global);
      total_ms += outcome.elapsed_ms;
      if (req.method == "gls") {
        err << "# seed " << outcome.seed << " latency " << outcome.latency << " generations "
            << outcome.generations << " initial_population " << outcome.initial_population << '\n';
      }
      if (!best || outcome.latency < best->latency) best = std::move(outcome);
    }
    std::string text = write_schedule(best->tree, best->schedule);
    if (req.out.empty()) {
      out << text;
    } else {
      write_file(req.out, text);
    }
    out << best->latency << ' ' << best->generations << ' ' << total_ms << ' ' << best->seed << '\n';
    return kOk;
  });
}

int cmd_bound(const std::string& graph, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto r = lower_bound(load_for_cli(graph, global));
    out << r.lb << ' ' << r.lb_log << ' ' << r.lb_ecc << '\n';
    return kOk;
  });
}

int cmd_check(const CheckRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Graph g = load_for_cli(req.graph, global);
    bool feasible = true;
    std::optional<ScheduleFile> sched;
    if (!req.schedule.empty()) {
      sched = load_schedule(req.schedule);
      auto problems = check_schedule(g, sched->tree, sched->schedule);
      for (const auto& p : problems) out << "violation: " << p << '\n';
      if (problems.empty()) {
        out << "schedule feasible, latency " << sched->schedule.latency << '\n';
      } else {
        feasible = false;
      }
    }
    if (!req.model.empty()) {
      if (req.model != "ip1" && req.model != "ip2") throw Error("--model must be ip1 or ip2");
      IpModel model = req.model == "ip1" ? build_ip1(g) : build_ip2(g);
      Assignment a;
      if (!req.assignment.empty()) {
        a = read_assignment(read_file(req.assignment));
      } else if (sched && feasible) {
        a = req.model == "ip1" ? encode_ip1_solution(g, sched->tree, sched->schedule)
                               : encode_ip2_solution(g, sched->tree, sched->schedule);
      } else if (!sched) {
        throw Error("--model needs a schedule or --assignment");
      } else {
        return static_cast<int>(kInfeasible);
      }
      if (!req.write_assignment.empty()) write_file(req.write_assignment, write_assignment(a));
      auto ev = evaluate(model, a);
      for (const auto& v : ev.violated) out << "violation: " << v << '\n';
      out << req.model << (ev.feasible ? " feasible" : " infeasible") << ", objective " << ev.objective << '\n';
      feasible = feasible && ev.feasible;
    }
    if (req.schedule.empty() && req.model.empty()) throw Error("check needs a schedule file or --model");
    return feasible ? static_cast<int>(kOk) : static_cast<int>(kInfeasible);
  });
}

int cmd_emit(const EmitRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (req.formulation != "ip1" && req.formulation != "ip2") throw Error("formulation must be ip1 or ip2");
    Graph g = load_for_cli(req.graph, global);
    IpModel model = req.formulation == "ip1" ? build_ip1(g) : build_ip2(g);
    std::string text = write_lp(model);
    std::ostream& report = req.out.empty() ? err : out;
    if (req.out.empty()) {
      out << text;
    } else {
      write_file(req.out, text);
    }
    report << "variables " << model.variables().size() << " constraints " << model.constraints().size() << '\n';
    return kOk;
  });
}

}  // namespace convergecast::cli
