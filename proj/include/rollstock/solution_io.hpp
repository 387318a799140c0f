#pragma once

// JSON form of solutions and portfolios. Output is byte-stable: no timings,
// exact objectives as strings, keys in fixed order.

#include "rollstock/anneal.hpp"
#include "rollstock/exact.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace rollstock {

/// Per-family row count and violated tags.
inline json constraint_summary(const IlpModel& ilp, const FeasibilityReport& report) {
  json out = json::object();
  for (RowKind k : kAllRowKinds) {
    json tags = json::array();
    for (const Violation& v : report.of(k)) tags.push_back(v.tag);
    out[to_string(k)] = {{"rows", ilp.count(k)}, {"violated", tags}};
  }
  return out;
}

inline json solution_json(const Instance& inst, const Hypergraph& g, const IlpModel& ilp, const Solution& s) {
  json selected = json::array();
  for (VarIndex i = 0; i < ilp.num_vars; ++i) {
    if (!s.x[i]) continue;
    const HyperArc& arc = g.arcs[ilp.var_arc[i]];
    selected.push_back({{"var", "x" + std::to_string(i)},
                        {"arc", g.describe(arc, inst)},
                        {"cost", to_string(arc.cost)}});
  }
  json x = json::array();
  for (auto v : s.x) x.push_back(static_cast<int>(v));
  return {{"objective", to_string(s.objective)},
          {"objective_float", to_double(s.objective)},
          {"feasible", s.report.feasible()},
          {"num_vars", ilp.num_vars},
          {"selected", selected},
          {"x", x},
          {"constraints", constraint_summary(ilp, s.report)}};
}

inline json portfolio_json(const Instance& inst, const Hypergraph& g, const IlpModel& ilp,
                           const SolutionPortfolio& p) {
  json list = json::array();
  for (const Solution& s : p.solutions) list.push_back(solution_json(inst, g, ilp, s));
  return {{"exhaustive", p.exhaustive}, {"count", p.solutions.size()}, {"solutions", list}};
}

inline json rejected_json(const IlpModel& ilp, const std::vector<RejectedSample>& rejected) {
  json list = json::array();
  for (const RejectedSample& r : rejected) {
    json vars = json::array(), families = json::array();
    for (VarIndex i = 0; i < ilp.num_vars; ++i)
      if (r.decoded.x[i]) vars.push_back("x" + std::to_string(i));
    for (RowKind k : r.violated) families.push_back(to_string(k));
    std::string y;
    for (auto b : r.decoded.y) y += b ? '1' : '0';
    list.push_back({{"energy", to_string(r.decoded.energy)},
                    {"multiplicity", r.multiplicity},
                    {"selected", vars},
                    {"objective", to_string(objective_value(ilp, r.decoded.x))},
                    {"violated", families},
                    {"slack_consistent", r.decoded.slack_consistent},
                    {"y", y}});
  }
  return list;
}

/// Reads the decision vector of a solution file and checks it against the
/// instance: the variable count and every selected arc label must match.
inline Assignment read_solution(const json& doc, const Instance& inst, const Hypergraph& g, const IlpModel& ilp) {
  const json& sol = doc.contains("solution") ? doc.at("solution") : doc;
  if (!sol.contains("x") || !sol.at("x").is_array())
    throw std::runtime_error("solution: missing \"x\" array");
  if (sol.at("x").size() != ilp.num_vars)
    throw std::runtime_error("solution: has " + std::to_string(sol.at("x").size()) + " variables, instance has " +
                             std::to_string(ilp.num_vars));
  Assignment x(ilp.num_vars);
  for (std::size_t i = 0; i < x.size(); ++i) {
    int v = sol.at("x")[i].get<int>();
    if (v != 0 && v != 1) throw std::runtime_error("solution: x" + std::to_string(i) + " is not binary");
    x[i] = static_cast<std::uint8_t>(v);
  }
  if (sol.contains("selected")) {
    std::vector<std::string> expected, got;
    for (VarIndex i = 0; i < ilp.num_vars; ++i)
      if (x[i]) expected.push_back(g.describe(g.arcs[ilp.var_arc[i]], inst));
    for (const json& e : sol.at("selected")) got.push_back(e.at("arc").get<std::string>());
    if (expected != got) throw std::runtime_error("solution: selected arcs do not match the instance");
  }
  return x;
}

}  // namespace rollstock
