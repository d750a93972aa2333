#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "convergecast/graph.hpp"
#include "convergecast/tree.hpp"

namespace convergecast {

enum class VarKind { Binary, Integer };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Binary;
  std::int64_t lower = 0;
  std::int64_t upper = 1;

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Term {
  std::int64_t coef = 0;
  std::int32_t var = 0;  // index into IpModel::variables

  friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  std::int64_t rhs = 0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Solver-agnostic integer program: minimize objective subject to linear rows.
class IpModel {
 public:
  std::int32_t add_variable(std::string name, VarKind kind, std::int64_t lower, std::int64_t upper);
  void add_constraint(std::string name, std::vector<Term> terms, Sense sense, std::int64_t rhs);
  void set_objective(std::vector<Term> terms, std::int64_t constant = 0);

  /// Index of a variable; throws Error for unknown names.
  std::int32_t index(std::string_view name) const;
  bool contains(std::string_view name) const { return by_name_.count(std::string(name)) != 0; }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  std::int64_t objective_constant() const { return objective_constant_; }

  friend bool operator==(const IpModel& a, const IpModel& b) {
    return a.variables_ == b.variables_ && a.constraints_ == b.constraints_ &&
           a.objective_ == b.objective_ && a.objective_constant_ == b.objective_constant_;
  }

 private:
  std::vector<Variable> variables_;
  std::unordered_map<std::string, std::int32_t> by_name_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  std::int64_t objective_constant_ = 0;
};

/// Time-indexed arc formulation on the directed graph plus a fictive sink
/// successor (vertex id n). Binaries x_u_v_t for t = 1..n; the objective is the
/// slot in which the sink forwards to the fictive vertex, minus one, so it
/// equals the convergecast latency.
IpModel build_ip1(const Graph& g);

/// Compact formulation: slots t_i, depths u_i, latency L, parent indicators
/// x_i_j and order indicators y_i_j, with big-M = n + 1.
IpModel build_ip2(const Graph& g);

/// Row counts by constraint family, computed from graph quantities alone.
struct ModelSize {
  std::int64_t variables = 0;
  std::int64_t constraints = 0;
};
ModelSize ip1_size(const Graph& g);
ModelSize ip2_size(const Graph& g);

/// CPLEX LP text (Minimize / Subject To / Bounds / Generals / Binaries / End).
std::string write_lp(const IpModel& model);
/// Reads the subset of LP syntax that write_lp emits.
IpModel read_lp(std::string_view text);

using Assignment = std::map<std::string, std::int64_t, std::less<>>;

struct Evaluation {
  bool feasible = false;
  std::vector<std::string> violated;
  std::int64_t objective = 0;
};

/// Checks bounds, integrality domains and every row in exact integer arithmetic.
/// Throws Error when the assignment lacks a model variable.
Evaluation evaluate(const IpModel& model, const Assignment& a);

/// Tree + schedule as a full assignment of the respective model's variables.
/// Throws Error if check_schedule reports violations.
Assignment encode_ip1_solution(const Graph& g, const AggregationTree& t, const Schedule& s);
Assignment encode_ip2_solution(const Graph& g, const AggregationTree& t, const Schedule& s);

/// "name value" lines; '#' comments and blank lines skipped.
Assignment read_assignment(std::string_view text);
std::string write_assignment(const Assignment& a);

}  // namespace convergecast
