#pragma once

// Penalty-method QUBO compiled from an IlpModel, its Ising form, sample
// decoding and size metrics.

#include "rollstock/ilp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rollstock {

/// lambda[0..4] weigh coverage, continuity, depot, capacity and driver
/// penalties.
using Lambdas = std::array<Rational, 5>;

inline Lambdas default_lambdas() { return {100, 100, 100, 100, 100}; }

/// Penalty family (0-based lambda index) of a constraint kind.
inline std::size_t penalty_family(RowKind kind) {
  switch (kind) {
    case RowKind::coverage: return 0;
    case RowKind::flow_balance:
    case RowKind::out_degree: return 1;
    case RowKind::depot_out:
    case RowKind::depot_in: return 2;
    case RowKind::capacity_forbid: return 3;
    case RowKind::driver: return 4;
  }
  return 0;
}

struct SlackVar {
  std::size_t row = 0;       // ILP constraint index
  std::string tag;
  std::size_t position = 0;  // 1-based place in the unary chain
};

/// Unary slack chain of one inequality row: variables [first, first+width).
struct SlackGroup {
  std::size_t row = 0;
  std::size_t first = 0;
  std::size_t width = 0;
  std::int64_t lo = 0;
};

using QuadKey = std::pair<std::size_t, std::size_t>;  // i <= j

struct QuboModel {
  std::size_t num_decision = 0;
  std::size_t num_slack = 0;
  std::map<QuadKey, Rational> q;  // upper triangle, diagonal = linear terms
  Rational offset = 0;
  Lambdas lambdas = default_lambdas();
  std::vector<SlackVar> slack_map;  // index k <-> variable num_decision + k
  std::vector<SlackGroup> slack_groups;
  std::vector<ArcId> decode_hint;   // decision index -> arc id
  std::array<std::size_t, 5> family_terms{};  // distinct entries touched per penalty family

  std::size_t num_vars() const { return num_decision + num_slack; }
  std::size_t num_terms() const { return q.size(); }
};

struct IsingModel {
  std::size_t num_spins = 0;
  std::vector<Rational> h;
  std::map<QuadKey, Rational> j;  // i < j
  Rational offset = 0;
};

struct DecodedSample {
  Assignment y;
  Rational energy = 0;
  Assignment x;
  bool slack_consistent = false;
  FeasibilityReport report;

  bool feasible() const { return report.feasible(); }
};

namespace detail {

class QuboBuilder {
 public:
  explicit QuboBuilder(QuboModel& m) : m_(m) {}

  void add(std::size_t i, std::size_t j, const Rational& v) {
    if (v == 0) return;
    if (i > j) std::swap(i, j);
    m_.q[{i, j}] += v;
  }

  // weight * (sum a_i y_i + c)^2 with y binary.
  void add_square(const std::vector<std::pair<std::size_t, std::int64_t>>& terms, std::int64_t c,
                  const Rational& weight, std::set<QuadKey>& touched) {
    for (std::size_t a = 0; a < terms.size(); ++a) {
      auto [i, ai] = terms[a];
      add(i, i, weight * Rational(ai * ai + 2 * c * ai));
      touched.insert({i, i});
      for (std::size_t b = a + 1; b < terms.size(); ++b) {
        auto [j, aj] = terms[b];
        add(i, j, weight * Rational(2 * ai * aj));
        touched.insert({std::min(i, j), std::max(i, j)});
      }
    }
    m_.offset += weight * Rational(c * c);
  }

  void prune() { std::erase_if(m_.q, [](const auto& kv) { return kv.second == 0; }); }

 private:
  QuboModel& m_;
};

}  // namespace detail

/// Objective plus lambda-weighted penalties: equalities become squares,
/// inequalities squares with unary slack chains, capacity a linear term.
inline QuboModel encode_qubo(const IlpModel& ilp, const Lambdas& lambdas = default_lambdas()) {
  QuboModel m;
  m.lambdas = lambdas;
  m.num_decision = ilp.num_vars;
  m.decode_hint = ilp.var_arc;
  if (m.decode_hint.size() != ilp.num_vars) {
    m.decode_hint.resize(ilp.num_vars);
    for (std::size_t i = 0; i < ilp.num_vars; ++i) m.decode_hint[i] = i;
  }
  detail::QuboBuilder b(m);
  for (std::size_t i = 0; i < ilp.num_vars; ++i) b.add(i, i, ilp.objective[i]);

  std::array<std::set<QuadKey>, 5> touched;
  std::size_t next = ilp.num_vars;
  for (std::size_t r = 0; r < ilp.constraints.size(); ++r) {
    const ConstraintRow& row = ilp.constraints[r];
    std::size_t family = penalty_family(row.kind);
    const Rational& weight = lambdas[family];

    if (row.kind == RowKind::capacity_forbid) {
      bool linear_ok = (row.relation == Relation::eq || row.relation == Relation::le) && row.rhs == 0 &&
                       std::all_of(row.coeffs.begin(), row.coeffs.end(), [](const Term& t) { return t.coef > 0; });
      if (!linear_ok) throw std::invalid_argument("capacity row '" + row.tag + "' is not of the form sum x = 0");
      for (const Term& t : row.coeffs) {
        b.add(t.var, t.var, weight * t.coef);
        touched[family].insert({t.var, t.var});
      }
      continue;
    }

    std::vector<std::pair<std::size_t, std::int64_t>> terms;
    for (const Term& t : row.coeffs) terms.push_back({t.var, t.coef});
    std::int64_t lo = row.lower();
    std::int64_t width = row.upper() - lo;
    if (width < 0) throw std::invalid_argument("row '" + row.tag + "' has an empty range");
    if (width > 0) {
      m.slack_groups.push_back(SlackGroup{r, next, static_cast<std::size_t>(width), lo});
      for (std::int64_t k = 1; k <= width; ++k) {
        m.slack_map.push_back(SlackVar{r, row.tag, static_cast<std::size_t>(k)});
        terms.push_back({next++, -1});
      }
    }
    b.add_square(terms, -lo, weight, touched[family]);
  }
  m.num_slack = next - ilp.num_vars;
  b.prune();
  for (std::size_t f = 0; f < 5; ++f) m.family_terms[f] = touched[f].size();
  return m;
}

namespace detail {

inline void check_length(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(got) + " entries, model has " +
                                std::to_string(expected));
}

}  // namespace detail

inline Rational qubo_energy(const QuboModel& m, std::span<const std::uint8_t> y) {
  detail::check_length(m.num_vars(), y.size(), "assignment");
  Rational e = m.offset;
  for (const auto& [key, v] : m.q)
    if (y[key.first] && y[key.second]) e += v;
  return e;
}

/// Exact change of variables y = (s + 1) / 2.
inline IsingModel to_ising(const QuboModel& m) {
  IsingModel is;
  is.num_spins = m.num_vars();
  is.h.assign(is.num_spins, 0);
  is.offset = m.offset;
  for (const auto& [key, v] : m.q) {
    auto [i, j] = key;
    if (i == j) {
      is.h[i] += v / 2;
      is.offset += v / 2;
    } else {
      Rational quarter = v / 4;
      is.j[{i, j}] += quarter;
      is.h[i] += quarter;
      is.h[j] += quarter;
      is.offset += quarter;
    }
  }
  std::erase_if(is.j, [](const auto& kv) { return kv.second == 0; });
  return is;
}

/// Energy of spins s in {-1, +1}.
inline Rational ising_energy(const IsingModel& is, std::span<const std::int8_t> s) {
  detail::check_length(is.num_spins, s.size(), "spin vector");
  Rational e = is.offset;
  for (std::size_t i = 0; i < is.num_spins; ++i)
    if (is.h[i] != 0) e += s[i] > 0 ? is.h[i] : Rational(-is.h[i]);
  for (const auto& [key, v] : is.j) e += s[key.first] * s[key.second] > 0 ? v : Rational(-v);
  return e;
}

inline std::vector<std::int8_t> to_spins(std::span<const std::uint8_t> y) {
  std::vector<std::int8_t> s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) s[i] = y[i] ? 1 : -1;
  return s;
}

/// Slack bits that minimise the energy for decision bits x: each chain
/// holds clamp(activity - lo, 0, width) ones, filled from the front.
inline Assignment complete_slacks(const QuboModel& m, const IlpModel& ilp, std::span<const std::uint8_t> x) {
  detail::check_length(m.num_decision, x.size(), "decision vector");
  Assignment y(x.begin(), x.end());
  y.resize(m.num_vars(), 0);
  for (const SlackGroup& g : m.slack_groups) {
    std::int64_t fill = std::clamp<std::int64_t>(ilp.constraints[g.row].activity(x) - g.lo, 0,
                                                 static_cast<std::int64_t>(g.width));
    for (std::int64_t k = 0; k < fill; ++k) y[g.first + static_cast<std::size_t>(k)] = 1;
  }
  return y;
}

inline bool slacks_consistent(const QuboModel& m, const IlpModel& ilp, std::span<const std::uint8_t> y) {
  auto x = y.first(m.num_decision);
  for (const SlackGroup& g : m.slack_groups) {
    std::int64_t want = std::clamp<std::int64_t>(ilp.constraints[g.row].activity(x) - g.lo, 0,
                                                 static_cast<std::int64_t>(g.width));
    std::int64_t ones = 0;
    for (std::size_t k = 0; k < g.width; ++k) ones += y[g.first + k];
    if (ones != want) return false;
  }
  return true;
}

inline DecodedSample decode(const QuboModel& m, const IlpModel& ilp, std::span<const std::uint8_t> y) {
  detail::check_length(m.num_vars(), y.size(), "sample");
  DecodedSample d;
  d.y.assign(y.begin(), y.end());
  d.energy = qubo_energy(m, y);
  d.x.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m.num_decision));
  d.slack_consistent = slacks_consistent(m, ilp, y);
  d.report = check_feasibility(ilp, d.x);
  return d;
}

struct ScalingReport {
  std::size_t trips = 0;  // timetabled (obligatory) trips
  std::size_t single_trips = 0;
  std::size_t couplable_trips = 0;
  std::size_t service_trips = 0;  // optional trips, not counted above
  std::size_t depots = 0;
  std::size_t types = 0;
  Minute delta_min = 0;
  Minute delta_max = 0;
  std::size_t arcs = 0;
  std::size_t variable_bound = 0;  // |T'|^2 |R| + |T''|^3 |R|
  std::size_t depot_arcs = 0;
  std::size_t ilp_vars = 0;
  std::size_t ilp_rows = 0;
  std::size_t qubo_vars = 0;
  std::size_t qubo_slacks = 0;
  std::size_t qubo_terms = 0;
  std::array<std::size_t, 5> family_terms{};
  // Worst-case term bounds per penalty family: coverage, continuity, depot,
  // drivers.
  double bound_coverage = 0;
  double bound_continuity = 0;
  double bound_depot = 0;
  double bound_driver = 0;

  bool within_bounds() const {
    return family_terms[0] <= bound_coverage && family_terms[1] <= bound_continuity &&
           family_terms[2] <= bound_depot && family_terms[4] <= bound_driver;
  }
};

inline ScalingReport scaling_report(const Instance& inst, const Hypergraph& g, const IlpModel& ilp,
                                    const QuboModel& qubo) {
  ScalingReport s;
  SizeBounds sb = size_bounds(inst, g);
  for (const Trip& t : inst.trips) {
    if (!t.obligatory)
      ++s.service_trips;
    else if (t.couplable)
      ++s.couplable_trips;
    else
      ++s.single_trips;
  }
  s.trips = s.single_trips + s.couplable_trips;
  s.depots = inst.depots.size();
  s.types = inst.emu_types.size();
  s.delta_min = inst.delta_min;
  s.delta_max = inst.delta_max;
  s.arcs = g.arcs.size();
  s.variable_bound = sb.variable_bound;
  s.depot_arcs = sb.depot_arcs;
  s.ilp_vars = ilp.num_vars;
  s.ilp_rows = ilp.constraints.size();
  s.qubo_vars = qubo.num_vars();
  s.qubo_slacks = qubo.num_slack;
  s.qubo_terms = qubo.num_terms();
  s.family_terms = qubo.family_terms;

  const double T = static_cast<double>(inst.trips.size());
  const double R = static_cast<double>(s.types);
  double N = 0;
  for (const Depot& d : inst.depots)
    for (const auto* bounds : {&d.out_max, &d.in_max})
      for (const auto& [type, v] : *bounds) N = std::max(N, static_cast<double>(v));
  double A = 0;
  std::set<Minute> checkpoints;
  for (const DriverWindow& w : inst.driver_windows) {
    A = std::max(A, static_cast<double>(w.max_drivers));
    checkpoints.insert(w.at);
  }
  s.bound_coverage = std::pow(T, 5) * R * R;
  s.bound_continuity = 2 * R * T * std::pow(R * T * T, 2);
  s.bound_depot = 2 * R * T * std::pow(2 * R * T + N, 2);
  s.bound_driver = static_cast<double>(s.depots) * static_cast<double>(checkpoints.size()) * std::pow(2 * R * T + A, 2);
  return s;
}

/// COO text: header lines starting with '#', then "i j value" per stored
/// entry in (i, j) order.
inline std::string export_qubo_coo(const QuboModel& m) {
  std::ostringstream os;
  os << "# qubo num_vars=" << m.num_vars() << " num_decision=" << m.num_decision << " num_slack=" << m.num_slack
     << " terms=" << m.num_terms() << "\n";
  os << "# offset=" << to_string(m.offset) << "\n";
  for (std::size_t k = 0; k < m.slack_map.size(); ++k)
    os << "# slack " << (m.num_decision + k) << " " << m.slack_map[k].tag << " " << m.slack_map[k].position << "\n";
  for (const auto& [key, v] : m.q) os << key.first << " " << key.second << " " << to_string(v) << "\n";
  return os.str();
}

/// Same shape as the QUBO export; fields appear as "i i h".
inline std::string export_ising_coo(const IsingModel& is) {
  std::ostringstream os;
  os << "# ising num_spins=" << is.num_spins << " couplings=" << is.j.size() << "\n";
  os << "# offset=" << to_string(is.offset) << "\n";
  std::map<QuadKey, const Rational*> entries;
  for (std::size_t i = 0; i < is.num_spins; ++i)
    if (is.h[i] != 0) entries[{i, i}] = &is.h[i];
  for (const auto& [key, v] : is.j) entries[key] = &v;
  for (const auto& [key, v] : entries) os << key.first << " " << key.second << " " << to_string(*v) << "\n";
  return os.str();
}

}  // namespace rollstock
