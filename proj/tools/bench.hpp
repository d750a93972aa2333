#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"

namespace convergecast::cli {

/// One benchmark instance resolved from a suite spec.
struct InstanceSpec {
  std::string label;   // unique key, e.g. "se4" or "random_n10_p0.6_s3"
  std::string family;  // ccc | bf | se | random | waxman | file
  GenRequest gen;
  std::uint64_t graph_seed = 0;
  std::string path;  // family == "file"
};

/// Suite grammar: items separated by ';' or whitespace.
///   ccc:D[..D2]  bf:D[..D2]  se:D[..D2]
///   random:N:P:COUNT       graphs seeded 1..COUNT
///   waxman:N:ALPHA:BETA:COUNT
///   file:PATH
std::vector<InstanceSpec> parse_suite(const std::string& suite);

struct RunRecord {
  std::string instance;
  std::string family;
  Vertex n = 0;
  std::int64_t m = 0;
  Vertex sink = 0;
  std::string method;  // gls | exact | spt | lb
  std::string seed;    // numeric, "best" for the best-of-seeds summary, empty when unused
  std::string latency; // integer, "error" for a failed run, "skipped" above a size cap
  std::int32_t lb = 0;
  std::int32_t generations = 0;
  std::int64_t elapsed_ms = 0;

  std::string key() const { return instance + "," + method + "," + seed; }
};

inline constexpr const char* kCsvHeader = "instance,family,n,m,sink,method,seed,latency,lb,generations,elapsed_ms";

std::string to_csv(const RunRecord& r);
RunRecord parse_csv_row(const std::string& line);

struct BenchRequest {
  std::string suite;
  std::vector<std::string> methods{"lb", "exact", "spt", "gls"};
  int seeds = 5;
  GlsParams params;
  std::string out;
};

/// Runs every (instance, method, seed) not already present in `req.out` and
/// appends one CSV row each, plus a best-of-seeds GLS row per instance.
/// Instances are spread over global.jobs workers; GLS itself runs single-threaded.
int cmd_bench(const BenchRequest& req, const GlobalOptions& global, std::ostream& out, std::ostream& err);

}  // namespace convergecast::cli
