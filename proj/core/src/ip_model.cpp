#include "convergecast/ip_model.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "text_lines.hpp"

namespace convergecast {
namespace {

std::string join_name(std::string_view prefix, std::initializer_list<std::int64_t> ids) {
  std::string out(prefix);
  for (auto id : ids) {
    out += '_';
    out += std::to_string(id);
  }
  return out;
}

// Directed arcs (i, j) over graph edges, none leaving the sink; ordered by (i, j).
std::vector<std::pair<Vertex, Vertex>> directed_arcs(const Graph& g) {
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (Vertex i = 0; i < g.n(); ++i) {
    if (i == g.sink()) continue;
    for (Vertex j : g.neighbors(i)) arcs.emplace_back(i, j);
  }
  return arcs;
}

std::int64_t arc_count(const Graph& g) { return 2 * g.m() - g.degree(g.sink()); }

std::int64_t choose2(std::int64_t k) { return k * (k - 1) / 2; }

void require_feasible(const Graph& g, const AggregationTree& t, const Schedule& s) {
  auto problems = check_schedule(g, t, s);
  if (!problems.empty()) throw Error("cannot encode an infeasible schedule: " + problems.front());
}

}  // namespace

std::int32_t IpModel::add_variable(std::string name, VarKind kind, std::int64_t lower, std::int64_t upper) {
  auto idx = static_cast<std::int32_t>(variables_.size());
  if (!by_name_.emplace(name, idx).second) throw Error("duplicate variable " + name);
  variables_.push_back(Variable{std::move(name), kind, lower, upper});
  return idx;
}

void IpModel::add_constraint(std::string name, std::vector<Term> terms, Sense sense, std::int64_t rhs) {
  for (const auto& term : terms) {
    if (term.var < 0 || term.var >= static_cast<std::int32_t>(variables_.size())) {
      throw Error("constraint " + name + " references an undeclared variable");
    }
  }
  constraints_.push_back(Constraint{std::move(name), std::move(terms), sense, rhs});
}

void IpModel::set_objective(std::vector<Term> terms, std::int64_t constant) {
  objective_ = std::move(terms);
  objective_constant_ = constant;
}

std::int32_t IpModel::index(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) throw Error("unknown variable " + std::string(name));
  return it->second;
}

IpModel build_ip1(const Graph& g) {
  const Vertex n = g.n();
  const Vertex s = g.sink();
  const Vertex fictive = n;
  auto arcs = directed_arcs(g);
  arcs.emplace_back(s, fictive);

  IpModel model;
  // var[a][t - 1]
  std::vector<std::vector<std::int32_t>> var(arcs.size());
  std::vector<std::vector<std::size_t>> out_arcs(static_cast<std::size_t>(n)), in_arcs(static_cast<std::size_t>(n));
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    auto [i, j] = arcs[a];
    for (Vertex t = 1; t <= n; ++t) {
      var[a].push_back(model.add_variable(join_name("x", {i, j, t}), VarKind::Binary, 0, 1));
    }
    out_arcs[i].push_back(a);
    if (j != fictive) in_arcs[j].push_back(a);
  }

  std::vector<Term> objective;
  for (Vertex t = 2; t <= n; ++t) objective.push_back({t - 1, var.back()[t - 1]});
  model.set_objective(std::move(objective));

  // every vertex transmits exactly once
  for (Vertex v = 0; v < n; ++v) {
    std::vector<Term> terms;
    for (auto a : out_arcs[v]) {
      for (Vertex t = 1; t <= n; ++t) terms.push_back({1, var[a][t - 1]});
    }
    model.add_constraint(join_name("send_once", {v}), std::move(terms), Sense::Equal, 1);
  }
  // no reception after the vertex has transmitted
  for (Vertex v = 0; v < n; ++v) {
    for (auto in : in_arcs[v]) {
      for (Vertex t = 1; t < n; ++t) {
        std::vector<Term> terms;
        for (Vertex later = t + 1; later <= n; ++later) terms.push_back({1, var[in][later - 1]});
        for (auto a : out_arcs[v]) terms.push_back({1, var[a][t - 1]});
        model.add_constraint(join_name("quiet_after_send", {arcs[in].first, v, t}), std::move(terms),
                             Sense::LessEqual, 1);
      }
    }
  }
  // one action (send or a single reception) per vertex and slot
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex t = 1; t <= n; ++t) {
      std::vector<Term> terms;
      for (auto a : out_arcs[v]) terms.push_back({1, var[a][t - 1]});
      for (auto a : in_arcs[v]) terms.push_back({1, var[a][t - 1]});
      model.add_constraint(join_name("one_action", {v, t}), std::move(terms), Sense::LessEqual, 1);
    }
  }
  return model;
}

IpModel build_ip2(const Graph& g) {
  const Vertex n = g.n();
  const Vertex s = g.sink();
  const std::int64_t big_m = n + 1;
  const std::int64_t horizon = std::max<std::int64_t>(n - 1, 1);

  IpModel model;
  std::vector<std::int32_t> slot(static_cast<std::size_t>(n), -1), depth(static_cast<std::size_t>(n), -1);
  for (Vertex i = 0; i < n; ++i) {
    if (i != s) slot[i] = model.add_variable(join_name("t", {i}), VarKind::Integer, 1, horizon);
  }
  for (Vertex i = 0; i < n; ++i) {
    if (i != s) depth[i] = model.add_variable(join_name("u", {i}), VarKind::Integer, 0, n - 1);
  }
  const auto length = model.add_variable("L", VarKind::Integer, 0, n - 1);

  const auto arcs = directed_arcs(g);
  std::map<std::pair<Vertex, Vertex>, std::int32_t> parent_var;
  for (auto [i, j] : arcs) {
    parent_var[{i, j}] = model.add_variable(join_name("x", {i, j}), VarKind::Binary, 0, 1);
  }
  std::map<std::pair<Vertex, Vertex>, std::int32_t> order_var;
  for (Vertex i = 0; i < n; ++i) {
    if (i == s) continue;
    for (Vertex j = i + 1; j < n; ++j) {
      if (j != s) order_var[{i, j}] = model.add_variable(join_name("y", {i, j}), VarKind::Binary, 0, 1);
    }
  }
  model.set_objective({{1, length}});

  for (Vertex i = 0; i < n; ++i) {
    if (i == s) continue;
    model.add_constraint(join_name("latency", {i}), {{1, length}, {-1, slot[i]}}, Sense::GreaterEqual, 0);
  }
  for (Vertex i = 0; i < n; ++i) {
    if (i == s) continue;
    std::vector<Term> terms;
    for (Vertex j : g.neighbors(i)) terms.push_back({1, parent_var.at({i, j})});
    model.add_constraint(join_name("one_parent", {i}), std::move(terms), Sense::Equal, 1);
  }
  // depth(i) = depth(j) + 1 on chosen arcs; the sink's depth is the constant 0
  for (auto [i, j] : arcs) {
    auto x = parent_var.at({i, j});
    auto build = [&](std::int64_t x_coef) {
      std::vector<Term> terms{{1, depth[i]}};
      if (j != s) terms.push_back({-1, depth[j]});
      terms.push_back({x_coef, x});
      return terms;
    };
    model.add_constraint(join_name("depth_lo", {i, j}), build(-big_m), Sense::GreaterEqual, 1 - big_m);
    model.add_constraint(join_name("depth_hi", {i, j}), build(big_m), Sense::LessEqual, 1 + big_m);
  }
  // children i < j of a common parent k (the sink included) use distinct slots
  for (Vertex k = 0; k < n; ++k) {
    std::vector<Vertex> senders;
    for (Vertex i : g.neighbors(k)) {
      if (i != s) senders.push_back(i);
    }
    for (std::size_t a = 0; a < senders.size(); ++a) {
      for (std::size_t b = a + 1; b < senders.size(); ++b) {
        Vertex i = senders[a], j = senders[b];
        model.add_constraint(join_name("sibling", {i, j, k}),
                             {{1, slot[j]},
                              {-1, slot[i]},
                              {big_m, parent_var.at({i, k})},
                              {big_m, parent_var.at({j, k})},
                              {big_m, order_var.at({i, j})}},
                             Sense::LessEqual, 3 * big_m - 1);
      }
    }
  }
  // y_ij = 1 exactly when t_i >= t_j
  for (const auto& [pair, y] : order_var) {
    auto [i, j] = pair;
    std::vector<Term> terms{{1, slot[j]}, {-1, slot[i]}, {big_m, y}};
    model.add_constraint(join_name("order_lo", {i, j}), terms, Sense::GreaterEqual, 1);
    model.add_constraint(join_name("order_hi", {i, j}), terms, Sense::LessEqual, big_m);
  }
  // a child sends strictly before its parent
  for (auto [i, j] : arcs) {
    if (j == s) continue;
    model.add_constraint(join_name("child_first", {i, j}),
                         {{1, slot[i]}, {-1, slot[j]}, {big_m, parent_var.at({i, j})}}, Sense::LessEqual,
                         big_m - 1);
  }
  return model;
}

ModelSize ip1_size(const Graph& g) {
  const std::int64_t n = g.n();
  const std::int64_t arcs = arc_count(g);
  return {(arcs + 1) * n, n + arcs * (n - 1) + n * n};
}

ModelSize ip2_size(const Graph& g) {
  const std::int64_t n = g.n();
  const std::int64_t arcs = arc_count(g);
  std::int64_t sibling_rows = 0;
  for (Vertex k = 0; k < g.n(); ++k) {
    std::int64_t senders = g.degree(k) - (g.has_edge(k, g.sink()) ? 1 : 0);
    sibling_rows += choose2(senders);
  }
  const std::int64_t pairs = choose2(n - 1);
  return {2 * (n - 1) + 1 + arcs + pairs,
          2 * (n - 1) + 2 * arcs + sibling_rows + 2 * pairs + (arcs - g.degree(g.sink()))};
}

namespace {

void append_terms(std::string& out, const IpModel& model, const std::vector<Term>& terms) {
  std::size_t on_line = 0;
  for (std::size_t idx = 0; idx < terms.size(); ++idx) {
    const auto& term = terms[idx];
    if (on_line == 8) {
      out += "\n  ";
      on_line = 0;
    }
    std::int64_t mag = term.coef < 0 ? -term.coef : term.coef;
    if (idx == 0) {
      if (term.coef < 0) out += "- ";
    } else {
      out += term.coef < 0 ? " - " : " + ";
    }
    if (mag != 1) {
      out += std::to_string(mag);
      out += ' ';
    }
    out += model.variables()[term.var].name;
    ++on_line;
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "?";
}

}  // namespace

std::string write_lp(const IpModel& model) {
  std::string out = "Minimize\n obj: ";
  if (model.objective().empty()) {
    out += "0 " + (model.variables().empty() ? std::string("L") : model.variables().front().name);
  } else {
    append_terms(out, model, model.objective());
  }
  if (model.objective_constant() != 0) {
    out += model.objective_constant() < 0 ? " - " : " + ";
    out += std::to_string(std::abs(model.objective_constant()));
  }
  out += "\nSubject To\n";
  for (const auto& row : model.constraints()) {
    out += ' ';
    out += row.name;
    out += ": ";
    append_terms(out, model, row.terms);
    out += ' ';
    out += sense_text(row.sense);
    out += ' ';
    out += std::to_string(row.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.kind == VarKind::Integer) {
      out += ' ' + std::to_string(v.lower) + " <= " + v.name + " <= " + std::to_string(v.upper) + '\n';
    }
  }
  auto list_section = [&](const char* title, VarKind kind) {
    std::string body;
    std::size_t on_line = 0;
    for (const auto& v : model.variables()) {
      if (v.kind != kind) continue;
      body += ' ';
      body += v.name;
      if (++on_line == 10) {
        body += '\n';
        on_line = 0;
      }
    }
    if (body.empty()) return;
    if (on_line != 0) body += '\n';
    out += title;
    out += '\n';
    out += body;
  };
  list_section("Generals", VarKind::Integer);
  list_section("Binaries", VarKind::Binary);
  out += "End\n";
  return out;
}

namespace {

enum class Section { None, Objective, Constraints, Bounds, Generals, Binaries, End };

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct PendingRow {
  std::string name;
  std::vector<std::pair<std::int64_t, std::string>> terms;
  std::optional<Sense> sense;
  std::optional<std::int64_t> rhs;
  int line = 0;
};

}  // namespace

IpModel read_lp(std::string_view text) {
  // Pass 1: gather tokens per section.
  struct Token {
    std::string_view text;
    int line;
  };
  std::map<Section, std::vector<Token>> tokens;
  Section section = Section::None;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::string key = lower(line);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    std::size_t lead = key.find_first_not_of(" \t");
    key = lead == std::string::npos ? "" : key.substr(lead);
    if (key == "minimize") { section = Section::Objective; continue; }
    if (key == "subject to") { section = Section::Constraints; continue; }
    if (key == "bounds") { section = Section::Bounds; continue; }
    if (key == "generals") { section = Section::Generals; continue; }
    if (key == "binaries") { section = Section::Binaries; continue; }
    if (key == "end") { section = Section::End; continue; }
    if (section == Section::None || section == Section::End) {
      if (!key.empty() && key.front() != '\\') detail::fail_at(line_no, "text outside any section");
      continue;
    }
    for (auto& field : detail::content_lines(line)) {
      for (auto f : field.fields) tokens[section].push_back({f, line_no});
    }
  }

  auto parse_rows = [](const std::vector<Token>& toks) {
    std::vector<PendingRow> rows;
    std::int64_t sign = 1;
    std::int64_t coef = 1;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      std::string_view tok = toks[i].text;
      int line = toks[i].line;
      if (tok.size() > 1 && tok.back() == ':') {
        rows.push_back(PendingRow{std::string(tok.substr(0, tok.size() - 1)), {}, {}, {}, line});
        sign = 1;
        coef = 1;
        continue;
      }
      if (rows.empty()) detail::fail_at(line, "row without a name");
      auto& row = rows.back();
      if (row.sense) {
        if (row.rhs) detail::fail_at(line, "unexpected token after right-hand side");
        auto value = detail::parse_int(tok);
        if (!value) detail::fail_at(line, "right-hand side must be an integer");
        row.rhs = *value;
        continue;
      }
      if (tok == "+") { continue; }
      if (tok == "-") { sign = -sign; continue; }
      if (tok == "<=" || tok == "=<") { row.sense = Sense::LessEqual; continue; }
      if (tok == ">=" || tok == "=>") { row.sense = Sense::GreaterEqual; continue; }
      if (tok == "=") { row.sense = Sense::Equal; continue; }
      if (auto value = detail::parse_int(tok)) {
        coef = *value;
        continue;
      }
      row.terms.emplace_back(sign * coef, std::string(tok));
      sign = 1;
      coef = 1;
    }
    return rows;
  };

  IpModel model;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> bounds;
  const auto& bound_tokens = tokens[Section::Bounds];
  for (std::size_t i = 0; i < bound_tokens.size(); i += 5) {
    if (i + 4 >= bound_tokens.size() || bound_tokens[i + 1].text != "<=" || bound_tokens[i + 3].text != "<=") {
      detail::fail_at(bound_tokens[i].line, "bounds must read \"lo <= name <= hi\"");
    }
    auto lo = detail::parse_int(bound_tokens[i].text);
    auto hi = detail::parse_int(bound_tokens[i + 4].text);
    if (!lo || !hi) detail::fail_at(bound_tokens[i].line, "integer bounds expected");
    bounds[std::string(bound_tokens[i + 2].text)] = {*lo, *hi};
  }
  for (const auto& tok : tokens[Section::Generals]) {
    std::string name(tok.text);
    auto it = bounds.find(name);
    if (it == bounds.end()) detail::fail_at(tok.line, "general variable " + name + " has no bounds");
    model.add_variable(name, VarKind::Integer, it->second.first, it->second.second);
  }
  for (const auto& tok : tokens[Section::Binaries]) model.add_variable(std::string(tok.text), VarKind::Binary, 0, 1);

  auto resolve = [&](const PendingRow& row) {
    std::vector<Term> terms;
    for (const auto& [c, name] : row.terms) {
      if (!model.contains(name)) detail::fail_at(row.line, "undeclared variable " + name);
      if (c != 0) terms.push_back({c, model.index(name)});
    }
    return terms;
  };

  auto objective_rows = parse_rows(tokens[Section::Objective]);
  if (objective_rows.size() != 1) throw Error("LP text must contain exactly one objective");
  {
    // a trailing bare integer in the objective is a constant
    auto& obj = objective_rows.front();
    std::int64_t constant = 0;
    const auto& toks = tokens[Section::Objective];
    if (toks.size() >= 2) {
      if (auto value = detail::parse_int(toks.back().text)) {
        constant = toks[toks.size() - 2].text == "-" ? -*value : *value;
      }
    }
    model.set_objective(resolve(obj), constant);
  }
  for (const auto& row : parse_rows(tokens[Section::Constraints])) {
    if (!row.sense || !row.rhs) detail::fail_at(row.line, "row " + row.name + " lacks a sense or right-hand side");
    model.add_constraint(row.name, resolve(row), *row.sense, *row.rhs);
  }
  return model;
}

Evaluation evaluate(const IpModel& model, const Assignment& a) {
  std::vector<std::int64_t> value(model.variables().size());
  Evaluation ev;
  for (std::size_t i = 0; i < model.variables().size(); ++i) {
    const auto& var = model.variables()[i];
    auto it = a.find(var.name);
    if (it == a.end()) throw Error("assignment lacks variable " + var.name);
    value[i] = it->second;
    if (value[i] < var.lower || value[i] > var.upper) {
      ev.violated.push_back("bound: " + var.name + " = " + std::to_string(value[i]) + " outside [" +
                            std::to_string(var.lower) + ", " + std::to_string(var.upper) + "]");
    }
  }
  for (const auto& row : model.constraints()) {
    std::int64_t lhs = 0;
    for (const auto& term : row.terms) lhs += term.coef * value[term.var];
    bool ok = row.sense == Sense::LessEqual ? lhs <= row.rhs
              : row.sense == Sense::Equal   ? lhs == row.rhs
                                            : lhs >= row.rhs;
    if (!ok) {
      ev.violated.push_back(row.name + ": " + std::to_string(lhs) + " " + sense_text(row.sense) + " " +
                            std::to_string(row.rhs) + " fails");
    }
  }
  ev.objective = model.objective_constant();
  for (const auto& term : model.objective()) ev.objective += term.coef * value[term.var];
  ev.feasible = ev.violated.empty();
  return ev;
}

Assignment encode_ip1_solution(const Graph& g, const AggregationTree& t, const Schedule& s) {
  require_feasible(g, t, s);
  const Vertex n = g.n();
  if (s.latency + 1 > n) throw Error("schedule extends past the model horizon of " + std::to_string(n) + " slots");
  Assignment a;
  auto arcs = directed_arcs(g);
  arcs.emplace_back(g.sink(), n);
  for (auto [i, j] : arcs) {
    for (Vertex slot = 1; slot <= n; ++slot) a[join_name("x", {i, j, slot})] = 0;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (v != g.sink()) a[join_name("x", {v, t.parent(v), s.slot[v]})] = 1;
  }
  a[join_name("x", {g.sink(), n, s.latency + 1})] = 1;
  return a;
}

Assignment encode_ip2_solution(const Graph& g, const AggregationTree& t, const Schedule& s) {
  require_feasible(g, t, s);
  const Vertex sink = g.sink();
  const auto depth = t.depths();
  Assignment a;
  for (Vertex i = 0; i < g.n(); ++i) {
    if (i == sink) continue;
    a[join_name("t", {i})] = s.slot[i];
    a[join_name("u", {i})] = depth[i];
    for (Vertex j : g.neighbors(i)) a[join_name("x", {i, j})] = t.parent(i) == j ? 1 : 0;
    for (Vertex j = i + 1; j < g.n(); ++j) {
      if (j != sink) a[join_name("y", {i, j})] = s.slot[i] >= s.slot[j] ? 1 : 0;
    }
  }
  a["L"] = s.latency;
  return a;
}

Assignment read_assignment(std::string_view text) {
  Assignment a;
  for (const auto& line : detail::content_lines(text)) {
    if (line.fields.size() != 2) detail::fail_at(line.number, "assignment line must be \"name value\"");
    auto value = detail::int_field(line, 1, "value");
    if (!a.emplace(std::string(line.fields[0]), value).second) {
      detail::fail_at(line.number, "variable " + std::string(line.fields[0]) + " assigned twice");
    }
  }
  return a;
}

std::string write_assignment(const Assignment& a) {
  std::string out;
  for (const auto& [name, value] : a) out += name + " " + std::to_string(value) + "\n";
  return out;
}

}  // namespace convergecast
