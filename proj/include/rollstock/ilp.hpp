#pragma once

// Integer linear program over the hypergraph: one binary per arc, a linear
// objective (weighted operating cost plus EMUs dispatched) and seven
// families of constraint rows.

#include "rollstock/netbuild.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rollstock {

using VarIndex = std::size_t;
using Assignment = std::vector<std::uint8_t>;

enum class RowKind { coverage, flow_balance, out_degree, depot_out, depot_in, capacity_forbid, driver };
inline constexpr std::size_t kNumRowKinds = 7;
inline constexpr std::array<RowKind, kNumRowKinds> kAllRowKinds = {
    RowKind::coverage, RowKind::flow_balance,    RowKind::out_degree, RowKind::depot_out,
    RowKind::depot_in, RowKind::capacity_forbid, RowKind::driver};

inline const char* to_string(RowKind kind) {
  switch (kind) {
    case RowKind::coverage: return "coverage";
    case RowKind::flow_balance: return "flow_balance";
    case RowKind::out_degree: return "out_degree";
    case RowKind::depot_out: return "depot_out";
    case RowKind::depot_in: return "depot_in";
    case RowKind::capacity_forbid: return "capacity_forbid";
    case RowKind::driver: return "driver";
  }
  return "?";
}

enum class Relation { eq, le, range };

struct Term {
  VarIndex var = 0;
  std::int64_t coef = 0;
  bool operator==(const Term&) const = default;
};

struct ConstraintRow {
  RowKind kind = RowKind::coverage;
  std::vector<Term> coeffs;  // sorted by var, no zero coefficients
  Relation relation = Relation::eq;
  std::int64_t rhs = 0;  // eq, le
  std::int64_t lo = 0;   // range
  std::int64_t hi = 0;   // range
  std::string tag;

  std::int64_t min_activity() const {
    std::int64_t m = 0;
    for (const Term& t : coeffs) m += std::min<std::int64_t>(0, t.coef);
    return m;
  }
  std::int64_t max_activity() const {
    std::int64_t m = 0;
    for (const Term& t : coeffs) m += std::max<std::int64_t>(0, t.coef);
    return m;
  }
  /// Feasible interval of the row activity; `le` rows are bounded below by
  /// their minimum attainable activity.
  std::int64_t lower() const {
    switch (relation) {
      case Relation::eq: return rhs;
      case Relation::le: return min_activity();
      case Relation::range: return lo;
    }
    return lo;
  }
  std::int64_t upper() const { return relation == Relation::range ? hi : rhs; }

  std::int64_t activity(std::span<const std::uint8_t> x) const {
    std::int64_t s = 0;
    for (const Term& t : coeffs)
      if (x[t.var]) s += t.coef;
    return s;
  }
  bool satisfied_by(std::span<const std::uint8_t> x) const {
    std::int64_t a = activity(x);
    return lower() <= a && a <= upper();
  }
};

struct IlpModel {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;  // dense, one entry per variable
  std::vector<ConstraintRow> constraints;
  std::vector<ArcId> var_arc;  // decision variable -> hypergraph arc

  std::size_t count(RowKind kind) const {
    return static_cast<std::size_t>(std::count_if(constraints.begin(), constraints.end(),
                                                  [&](const ConstraintRow& r) { return r.kind == kind; }));
  }
};

struct Violation {
  std::size_t row = 0;
  std::string tag;
  std::int64_t lhs = 0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct FeasibilityReport {
  std::array<std::vector<Violation>, kNumRowKinds> violations;

  const std::vector<Violation>& of(RowKind kind) const { return violations[static_cast<std::size_t>(kind)]; }
  bool feasible() const {
    return std::all_of(violations.begin(), violations.end(), [](const auto& v) { return v.empty(); });
  }
  std::vector<RowKind> violated_families() const {
    std::vector<RowKind> out;
    for (RowKind k : kAllRowKinds)
      if (!of(k).empty()) out.push_back(k);
    return out;
  }
};

namespace detail {

class RowBuilder {
 public:
  void add(VarIndex var, std::int64_t coef) {
    if (coef == 0) return;
    for (Term& t : terms_)
      if (t.var == var) {
        t.coef += coef;
        return;
      }
    terms_.push_back(Term{var, coef});
  }
  std::vector<Term> take() {
    std::erase_if(terms_, [](const Term& t) { return t.coef == 0; });
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    return std::move(terms_);
  }

 private:
  std::vector<Term> terms_;
};

inline void push_range(std::vector<ConstraintRow>& rows, RowKind kind, std::vector<Term> coeffs, std::int64_t lo,
                       std::int64_t hi, std::string tag) {
  // Empty rows whose range admits zero constrain nothing.
  if (coeffs.empty() && lo <= 0 && 0 <= hi) return;
  ConstraintRow row;
  row.kind = kind;
  row.coeffs = std::move(coeffs);
  row.relation = Relation::range;
  row.lo = lo;
  row.hi = hi;
  row.tag = std::move(tag);
  rows.push_back(std::move(row));
}

inline void check_size(const IlpModel& model, std::span<const std::uint8_t> x) {
  if (x.size() != model.num_vars)
    throw std::invalid_argument("assignment has " + std::to_string(x.size()) + " entries, model has " +
                                std::to_string(model.num_vars) + " variables");
}

}  // namespace detail

/// Driver-availability rows for windows without a license (general form,
/// weighted by k(h) unless the instance asks for per-train counting).
inline std::vector<ConstraintRow> encode_driver_rows(const Hypergraph& g, const Instance& inst, bool licensed) {
  std::vector<ConstraintRow> rows;
  for (const DriverWindow& w : inst.driver_windows) {
    if (w.license.has_value() != licensed) continue;
    std::size_t d = *inst.depot_index(w.depot);
    detail::RowBuilder b;
    for (const HyperArc& a : g.arcs) b.add(a.id, driver_coefficient(inst, g, a, w.at, d, w.license));
    std::string tag = "driver:" + w.depot + "@" + std::to_string(w.at);
    if (w.license) tag += ":" + *w.license;
    detail::push_range(rows, RowKind::driver, b.take(), w.min_drivers, w.max_drivers, std::move(tag));
  }
  return rows;
}

/// Licensed-driver extension: one range row per (checkpoint, depot, license).
inline std::vector<ConstraintRow> encode_licensed_drivers(const Hypergraph& g, const Instance& inst) {
  return encode_driver_rows(g, inst, true);
}

/// Encodes objective and constraint families (coverage, continuity, depot
/// ranges, capacity, unlicensed drivers) of the circulation ILP.
inline IlpModel encode_ilp(const Hypergraph& g, const Instance& inst) {
  IlpModel m;
  m.num_vars = g.arcs.size();
  m.objective.resize(m.num_vars);
  m.var_arc.resize(m.num_vars);
  for (const HyperArc& a : g.arcs) {
    m.objective[a.id] = inst.alpha * a.cost + (a.kind == ArcKind::depot_out ? a.k_prime : 0);
    m.var_arc[a.id] = a.id;
  }
  auto& rows = m.constraints;

  for (std::size_t t = 0; t < inst.trips.size(); ++t) {
    if (!inst.trips[t].obligatory) continue;
    detail::RowBuilder b;
    for (ArcId h : g.idx_cover[t]) b.add(h, 1);
    ConstraintRow row;
    row.kind = RowKind::coverage;
    row.coeffs = b.take();
    row.relation = Relation::eq;
    row.rhs = 1;
    row.tag = "coverage:" + inst.trips[t].id;
    rows.push_back(std::move(row));
  }

  // Continuity: EMUs arriving on a trip (k per arc) leave it again (k' per
  // arc), per type.
  for (std::size_t t = 0; t < inst.trips.size(); ++t) {
    if (g.terminal[t]) continue;
    NodeId v = g.trip_node(t);
    for (TypeId r = 0; r < inst.emu_types.size(); ++r) {
      detail::RowBuilder b;
      for (ArcId h : g.in(v, r)) b.add(h, g.arcs[h].k);
      for (ArcId h : g.out(v, r)) b.add(h, -g.arcs[h].k_prime);
      auto coeffs = b.take();
      if (coeffs.empty()) continue;
      ConstraintRow row;
      row.kind = RowKind::flow_balance;
      row.coeffs = std::move(coeffs);
      row.relation = Relation::eq;
      row.rhs = 0;
      row.tag = "flow:" + inst.trips[t].id + ":" + inst.emu_types[r].id;
      rows.push_back(std::move(row));
    }
  }
  for (std::size_t t = 0; t < inst.trips.size(); ++t) {
    if (g.terminal[t]) continue;
    detail::RowBuilder b;
    for (TypeId r = 0; r < inst.emu_types.size(); ++r)
      for (ArcId h : g.out(g.trip_node(t), r)) b.add(h, 1);
    auto coeffs = b.take();
    if (coeffs.empty()) continue;
    ConstraintRow row;
    row.kind = RowKind::out_degree;
    row.coeffs = std::move(coeffs);
    row.relation = Relation::le;
    row.rhs = 1;
    row.tag = "out:" + inst.trips[t].id;
    rows.push_back(std::move(row));
  }

  for (std::size_t d = 0; d < inst.depots.size(); ++d) {
    const Depot& depot = inst.depots[d];
    for (TypeId r = 0; r < inst.emu_types.size(); ++r) {
      detail::RowBuilder b;
      auto it = g.idx_depot_out.find({d, r});
      if (it != g.idx_depot_out.end())
        for (ArcId h : it->second) b.add(h, g.arcs[h].k_prime);
      const std::string& type = inst.emu_types[r].id;
      detail::push_range(rows, RowKind::depot_out, b.take(), Depot::lookup(depot.out_min, type),
                         Depot::lookup(depot.out_max, type), "depot_out:" + depot.id + ":" + type);
    }
  }
  for (std::size_t d = 0; d < inst.depots.size(); ++d) {
    const Depot& depot = inst.depots[d];
    for (TypeId r = 0; r < inst.emu_types.size(); ++r) {
      detail::RowBuilder b;
      auto it = g.idx_depot_in.find({d, r});
      if (it != g.idx_depot_in.end())
        for (ArcId h : it->second) b.add(h, g.arcs[h].k);
      const std::string& type = inst.emu_types[r].id;
      detail::push_range(rows, RowKind::depot_in, b.take(), Depot::lookup(depot.in_min, type),
                         Depot::lookup(depot.in_max, type), "depot_in:" + depot.id + ":" + type);
    }
  }

  {
    detail::RowBuilder b;
    for (const HyperArc& a : g.arcs)
      if (a.exceeds_seat_tolerance || a.exceeds_bike_tolerance) b.add(a.id, 1);
    auto coeffs = b.take();
    if (!coeffs.empty()) {
      ConstraintRow row;
      row.kind = RowKind::capacity_forbid;
      row.coeffs = std::move(coeffs);
      row.relation = Relation::eq;
      row.rhs = 0;
      row.tag = "capacity";
      rows.push_back(std::move(row));
    }
  }

  for (auto& row : encode_driver_rows(g, inst, false)) rows.push_back(std::move(row));
  return m;
}

/// encode_ilp plus the licensed-driver rows.
inline IlpModel build_ilp(const Hypergraph& g, const Instance& inst) {
  IlpModel m = encode_ilp(g, inst);
  for (auto& row : encode_licensed_drivers(g, inst)) m.constraints.push_back(std::move(row));
  return m;
}

inline Rational objective_value(const IlpModel& model, std::span<const std::uint8_t> x) {
  detail::check_size(model, x);
  Rational value = 0;
  for (VarIndex i = 0; i < model.num_vars; ++i)
    if (x[i]) value += model.objective[i];
  return value;
}

inline FeasibilityReport check_feasibility(const IlpModel& model, std::span<const std::uint8_t> x) {
  detail::check_size(model, x);
  FeasibilityReport report;
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const ConstraintRow& row = model.constraints[i];
    std::int64_t lhs = row.activity(x);
    if (lhs < row.lower() || lhs > row.upper())
      report.violations[static_cast<std::size_t>(row.kind)].push_back(
          Violation{i, row.tag, lhs, row.lower(), row.upper()});
  }
  return report;
}

namespace detail {

inline std::string lp_number(const Rational& v) {
  std::string exact = to_string(v);
  if (exact.find('/') == std::string::npos) return exact;
  std::ostringstream os;
  os.precision(17);
  os << to_double(v);
  return os.str();
}

inline std::string lp_name(std::size_t index, const std::string& tag) {
  std::string name = "c" + std::to_string(index) + "_";
  for (char c : tag) name += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  return name;
}

inline void lp_row(std::ostringstream& os, const std::string& name, const std::vector<Term>& coeffs,
                   const char* sense, std::int64_t bound) {
  os << " " << name << ":";
  if (coeffs.empty()) os << " 0 x0";
  for (const Term& t : coeffs) os << " " << (t.coef < 0 ? "- " : "+ ") << (t.coef < 0 ? -t.coef : t.coef) << " x" << t.var;
  os << " " << sense << " " << bound << "\n";
}

}  // namespace detail

/// CPLEX-LP text; range rows become a >= and a <= row. Deterministic.
inline std::string export_lp(const IlpModel& model) {
  std::ostringstream os;
  os << "\\ rolling-stock circulation ILP: " << model.num_vars << " binaries, " << model.constraints.size()
     << " rows\n";
  os << "Minimize\n obj:";
  for (VarIndex i = 0; i < model.num_vars; ++i) {
    const Rational& c = model.objective[i];
    if (c == 0) continue;
    os << " " << (c < 0 ? "-" : "+") << detail::lp_number(c < 0 ? Rational(-c) : c) << " x" << i;
  }
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < model.constraints.size(); ++r) {
    const ConstraintRow& row = model.constraints[r];
    std::string name = detail::lp_name(r, row.tag);
    switch (row.relation) {
      case Relation::eq: detail::lp_row(os, name, row.coeffs, "=", row.rhs); break;
      case Relation::le: detail::lp_row(os, name, row.coeffs, "<=", row.rhs); break;
      case Relation::range:
        detail::lp_row(os, name + "_lo", row.coeffs, ">=", row.lo);
        detail::lp_row(os, name + "_hi", row.coeffs, "<=", row.hi);
        break;
    }
  }
  os << "Bounds\n";
  for (VarIndex i = 0; i < model.num_vars; ++i) os << " 0 <= x" << i << " <= 1\n";
  os << "Binary\n";
  for (VarIndex i = 0; i < model.num_vars; ++i) os << " x" << i << "\n";
  os << "End\n";
  return os.str();
}

}  // namespace rollstock
