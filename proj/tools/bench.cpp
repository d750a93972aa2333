#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "convergecast/oracles.hpp"

namespace convergecast::cli {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::int64_t to_int(const std::string& s, const std::string& item) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw Error("suite item '" + item + "': bad integer '" + s + "'");
  return v;
}

double to_real(const std::string& s, const std::string& item) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("suite item '" + item + "': bad number '" + s + "'");
  }
}

std::pair<std::int64_t, std::int64_t> range(const std::string& s, const std::string& item) {
  auto dots = s.find("..");
  if (dots == std::string::npos) {
    auto v = to_int(s, item);
    return {v, v};
  }
  return {to_int(s.substr(0, dots), item), to_int(s.substr(dots + 2), item)};
}

Graph build_instance(const InstanceSpec& spec) {
  if (spec.family == "file") return load_graph(spec.path);
  GlobalOptions g;
  g.seed = spec.graph_seed;
  return generate(spec.gen, g);
}

}  // namespace

std::vector<InstanceSpec> parse_suite(const std::string& suite) {
  std::string normalized = suite;
  std::replace(normalized.begin(), normalized.end(), ';', ' ');
  std::istringstream in(normalized);
  std::vector<InstanceSpec> out;
  std::set<std::string> labels;
  for (std::string item; in >> item;) {
    auto parts = split(item, ':');
    const std::string& family = parts[0];
    if (family == "ccc" || family == "bf" || family == "se") {
      if (parts.size() != 2) throw Error("suite item '" + item + "': expected " + family + ":D or " + family + ":D..D");
      auto [lo, hi] = range(parts[1], item);
      for (auto d = lo; d <= hi; ++d) {
        InstanceSpec spec;
        spec.label = family + std::to_string(d);
        spec.family = family;
        spec.gen.family = family;
        spec.gen.size = d;
        out.push_back(spec);
      }
    } else if (family == "random") {
      if (parts.size() != 4) throw Error("suite item '" + item + "': expected random:N:P:COUNT");
      auto n = to_int(parts[1], item);
      auto p = to_real(parts[2], item);
      auto count = to_int(parts[3], item);
      for (std::int64_t s = 1; s <= count; ++s) {
        InstanceSpec spec;
        spec.label = "random_n" + parts[1] + "_p" + parts[2] + "_s" + std::to_string(s);
        spec.family = family;
        spec.gen.family = family;
        spec.gen.size = n;
        spec.gen.p = p;
        spec.graph_seed = static_cast<std::uint64_t>(s);
        out.push_back(spec);
      }
    } else if (family == "waxman") {
      if (parts.size() != 5) throw Error("suite item '" + item + "': expected waxman:N:ALPHA:BETA:COUNT");
      auto n = to_int(parts[1], item);
      auto alpha = to_real(parts[2], item);
      auto beta = to_real(parts[3], item);
      auto count = to_int(parts[4], item);
      for (std::int64_t s = 1; s <= count; ++s) {
        InstanceSpec spec;
        spec.label = "waxman_n" + parts[1] + "_a" + parts[2] + "_b" + parts[3] + "_s" + std::to_string(s);
        spec.family = family;
        spec.gen.family = family;
        spec.gen.size = n;
        spec.gen.alpha = alpha;
        spec.gen.beta = beta;
        spec.graph_seed = static_cast<std::uint64_t>(s);
        out.push_back(spec);
      }
    } else if (family == "file") {
      if (parts.size() != 2 || parts[1].empty()) throw Error("suite item '" + item + "': expected file:PATH");
      InstanceSpec spec;
      spec.label = std::filesystem::path(parts[1]).stem().string();
      spec.family = family;
      spec.path = parts[1];
      out.push_back(spec);
    } else {
      throw Error("suite item '" + item + "': unknown family '" + family + "'");
    }
    if (!labels.insert(out.back().label).second) throw Error("suite lists instance " + out.back().label + " twice");
  }
  return out;
}

std::string to_csv(const RunRecord& r) {
  std::ostringstream s;
  s << r.instance << ',' << r.family << ',' << r.n << ',' << r.m << ',' << r.sink << ',' << r.method << ','
    << r.seed << ',' << r.latency << ',' << r.lb << ',' << r.generations << ',' << r.elapsed_ms;
  return s.str();
}

RunRecord parse_csv_row(const std::string& line) {
  auto f = split(line, ',');
  if (f.size() != 11) throw Error("CSV row has " + std::to_string(f.size()) + " fields: " + line);
  RunRecord r;
  r.instance = f[0];
  r.family = f[1];
  r.n = static_cast<Vertex>(to_int(f[2], line));
  r.m = to_int(f[3], line);
  r.sink = static_cast<Vertex>(to_int(f[4], line));
  r.method = f[5];
  r.seed = f[6];
  r.latency = f[7];
  r.lb = static_cast<std::int32_t>(to_int(f[8], line));
  r.generations = static_cast<std::int32_t>(to_int(f[9], line));
  r.elapsed_ms = to_int(f[10], line);
  return r;
}

int cmd_bench(const BenchRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  std::vector<InstanceSpec> instances;
  try {
    instances = parse_suite(req.suite);
    if (req.seeds < 1) throw Error("--seeds must be >= 1");
    if (req.out.empty()) throw Error("bench needs --out");
    for (const auto& m : req.methods) {
      if (m != "gls" && m != "exact" && m != "spt" && m != "lb") throw Error("unknown method '" + m + "'");
    }
    req.params.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  // rows already present, keyed by instance,method,seed
  std::map<std::string, RunRecord> done;
  bool need_header = true;
  if (std::filesystem::exists(req.out)) {
    std::ifstream in(req.out);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (first) {
        first = false;
        need_header = false;
        if (line == kCsvHeader) continue;
      }
      try {
        auto r = parse_csv_row(line);
        done.emplace(r.key(), r);
      } catch (const Error& e) {
        err << "warning: ignoring unreadable row: " << e.what() << '\n';
      }
    }
  }

  std::ofstream csv(req.out, std::ios::app);
  if (!csv) {
    err << "error: cannot write " << req.out << '\n';
    return kUsage;
  }
  if (need_header) csv << kCsvHeader << '\n' << std::flush;

  std::mutex writer;
  std::atomic<int> failures{0};
  std::atomic<std::size_t> written{0};
  auto emit = [&](const std::vector<RunRecord>& rows) {
    std::lock_guard lock(writer);
    for (const auto& r : rows) csv << to_csv(r) << '\n';
    csv.flush();
    written += rows.size();
  };

  auto run_instance = [&](const InstanceSpec& spec) {
    auto has = [&](const std::string& method, const std::string& seed) {
      return done.count(spec.label + "," + method + "," + seed) != 0;
    };
    std::vector<RunRecord> rows;
    std::optional<Graph> graph;
    RunRecord base;
    base.instance = spec.label;
    base.family = spec.family;
    try {
      graph = build_instance(spec);
      if (global.sink) graph = graph->with_sink(*global.sink);
    } catch (const Error& e) {
      std::lock_guard lock(writer);
      err << "error: instance " << spec.label << ": " << e.what() << '\n';
      ++failures;
      return;
    }
    const Graph& g = *graph;
    base.n = g.n();
    base.m = g.m();
    base.sink = g.sink();
    base.lb = lower_bound(g).lb;

    auto wants = [&](const char* m) { return std::find(req.methods.begin(), req.methods.end(), m) != req.methods.end(); };
    auto run = [&](const std::string& method, std::uint64_t seed, const std::string& seed_text) {
      RunRecord r = base;
      r.method = method;
      r.seed = seed_text;
      try {
        auto outcome = solve_once(g, method, req.params, seed, GlobalOptions{seed, {}, 1, global.time_limit_s});
        r.latency = std::to_string(outcome.latency);
        r.generations = outcome.generations;
        r.elapsed_ms = outcome.elapsed_ms;
        if (outcome.latency < r.lb) throw std::logic_error("latency below lower bound");
      } catch (const SizeCapError&) {
        r.latency = "skipped";
      } catch (const std::exception& e) {
        r.latency = "error";
        ++failures;
        std::lock_guard lock(writer);
        err << "error: " << spec.label << " " << method << " seed " << seed_text << ": " << e.what() << '\n';
      }
      rows.push_back(r);
    };

    if (wants("lb") && !has("lb", "")) {
      RunRecord r = base;
      r.method = "lb";
      r.latency = std::to_string(base.lb);
      rows.push_back(r);
    }
    if (wants("exact") && !has("exact", "")) run("exact", 0, "");
    if (wants("spt") && !has("spt", "")) run("spt", 0, "");
    if (wants("gls")) {
      for (int i = 0; i < req.seeds; ++i) {
        std::uint64_t seed = global.seed + static_cast<std::uint64_t>(i);
        if (!has("gls", std::to_string(seed))) run("gls", seed, std::to_string(seed));
      }
      if (!has("gls", "best")) {
        std::optional<std::int32_t> best;
        std::int32_t generations = 0;
        std::int64_t elapsed = 0;
        auto consider = [&](const RunRecord& r) {
          if (r.method != "gls" || r.seed == "best" || r.latency == "error") return;
          auto lat = static_cast<std::int32_t>(std::stol(r.latency));
          elapsed += r.elapsed_ms;
          if (!best || lat < *best) {
            best = lat;
            generations = r.generations;
          }
        };
        for (int i = 0; i < req.seeds; ++i) {
          auto it = done.find(spec.label + ",gls," + std::to_string(global.seed + static_cast<std::uint64_t>(i)));
          if (it != done.end()) consider(it->second);
        }
        for (const auto& r : rows) consider(r);
        RunRecord summary = base;
        summary.method = "gls";
        summary.seed = "best";
        summary.latency = best ? std::to_string(*best) : "error";
        summary.generations = generations;
        summary.elapsed_ms = elapsed;
        rows.push_back(summary);
      }
    }
    if (!rows.empty()) emit(rows);
  };

  const int jobs = std::max(1, std::min<int>(global.jobs, static_cast<int>(std::max<std::size_t>(instances.size(), 1))));
  if (jobs == 1) {
    for (const auto& spec : instances) run_instance(spec);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < instances.size();) run_instance(instances[i]);
      });
    }
  }
  out << "instances " << instances.size() << " rows_written " << written.load() << " failures " << failures.load()
      << '\n';
  return failures.load() == 0 ? kOk : kInfeasible;
}

}  // namespace convergecast::cli
