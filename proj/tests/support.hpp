#pragma once

// Shared fixtures and independent oracles for the unit tests and the
// acceptance binary.

#include "rollstock/exact.hpp"
#include "rollstock/generator.hpp"
#include "rollstock/ilp.hpp"
#include "rollstock/netbuild.hpp"
#include "rollstock/qubo.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace rollstock::testing {

struct Pipeline {
  Instance inst;
  Hypergraph g;
  IlpModel ilp;

  explicit Pipeline(Instance i) : inst(std::move(i)), g(build_hypergraph(inst)), ilp(build_ilp(g, inst)) {}
};

inline Instance toy_instance(const std::string& path) { return load_instance_file(path); }

inline Assignment with_ones(std::size_t n, std::initializer_list<std::size_t> ones) {
  Assignment x(n, 0);
  for (std::size_t i : ones) x.at(i) = 1;
  return x;
}

inline std::set<std::size_t> ones_of(const Assignment& x) {
  std::set<std::size_t> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) s.insert(i);
  return s;
}

/// Random binary program with every kind of row. Every variable sits in at
/// least one coverage row, which keeps feasible sets enumerable.
inline IlpModel random_model(std::mt19937_64& rng, std::size_t n) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  IlpModel m;
  m.num_vars = n;
  for (std::size_t i = 0; i < n; ++i) {
    m.objective.push_back(Rational(uni(0, 40), uni(1, 4)));
    m.var_arc.push_back(i);
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  auto make = [](RowKind kind, std::vector<Term> terms, Relation rel, std::int64_t rhs, std::int64_t lo,
                 std::int64_t hi, std::string tag) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    for (const Term& t : terms) {
      if (!merged.empty() && merged.back().var == t.var)
        merged.back().coef += t.coef;
      else
        merged.push_back(t);
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0; });
    ConstraintRow r;
    r.kind = kind;
    r.coeffs = std::move(merged);
    r.relation = rel;
    r.rhs = rhs;
    r.lo = lo;
    r.hi = hi;
    r.tag = std::move(tag);
    return r;
  };
  std::size_t pos = 0, row = 0;
  while (pos < n) {
    std::size_t len = std::min<std::size_t>(n - pos, static_cast<std::size_t>(uni(1, 4)));
    std::vector<Term> terms;
    for (std::size_t k = 0; k < len; ++k) terms.push_back({perm[pos + k], 1});
    if (uni(0, 3) == 0) terms.push_back({static_cast<VarIndex>(uni(0, static_cast<int>(n) - 1)), 1});
    pos += len;
    m.constraints.push_back(make(RowKind::coverage, terms, Relation::eq, 1, 0, 0, "cov" + std::to_string(row++)));
  }
  auto pick = [&] { return static_cast<VarIndex>(uni(0, static_cast<int>(n) - 1)); };
  int extra = uni(0, 4);
  for (int e = 0; e < extra; ++e) {
    std::string tag = "r" + std::to_string(row++);
    switch (uni(0, 4)) {
      case 0:
        m.constraints.push_back(make(RowKind::flow_balance, {{pick(), 1}, {pick(), uni(1, 2)}, {pick(), -1}, {pick(), -uni(1, 2)}},
                                     Relation::eq, 0, 0, 0, tag));
        break;
      case 1:
        m.constraints.push_back(make(RowKind::out_degree, {{pick(), 1}, {pick(), 1}, {pick(), 2}}, Relation::le, 1, 0, 0, tag));
        break;
      case 2: {
        int lo = uni(0, 1);
        m.constraints.push_back(make(RowKind::depot_out, {{pick(), 1}, {pick(), 2}, {pick(), 1}}, Relation::range, 0, lo,
                                     lo + uni(0, 2), tag));
        break;
      }
      case 3:
        m.constraints.push_back(make(RowKind::capacity_forbid, {{pick(), 1}}, Relation::le, 0, 0, 0, tag));
        break;
      default: {
        int lo = uni(0, 1);
        m.constraints.push_back(make(RowKind::driver, {{pick(), 1}, {pick(), 1}, {pick(), 2}, {pick(), 1}},
                                     Relation::range, 0, lo, lo + uni(1, 3), tag));
        break;
      }
    }
  }
  return m;
}

/// Small synthetic instance (2..max_trips trips) with a random shape.
inline Instance random_small_instance(std::uint64_t seed, int max_trips = 12) {
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  GeneratorConfig c;
  c.num_trips = uni(2, max_trips);
  c.num_types = uni(1, 2);
  c.num_couplable = uni(0, std::min(3, c.num_trips));
  c.rotation_length = 2 * uni(1, 3);
  c.delta_max = uni(30, 90);
  c.alpha = Rational(uni(0, 3), 100);
  return generate_synthetic(c, rng());
}

/// Energy the penalty method must assign to x with optimal slacks:
/// objective + lambda * squared distance of each row activity to its
/// interval, except capacity rows which cost lambda4 per selected arc.
inline Rational expected_energy(const IlpModel& ilp, const Lambdas& lambdas, const Assignment& x) {
  Rational e = objective_value(ilp, x);
  for (const ConstraintRow& row : ilp.constraints) {
    std::int64_t a = row.activity(x);
    if (row.kind == RowKind::capacity_forbid) {
      e += lambdas[3] * Rational(a);
      continue;
    }
    std::int64_t d = a < row.lower() ? row.lower() - a : (a > row.upper() ? a - row.upper() : 0);
    std::size_t fam = 0;
    switch (row.kind) {
      case RowKind::coverage: fam = 0; break;
      case RowKind::flow_balance:
      case RowKind::out_degree: fam = 1; break;
      case RowKind::depot_out:
      case RowKind::depot_in: fam = 2; break;
      default: fam = 4; break;
    }
    e += lambdas[fam] * Rational(d * d);
  }
  return e;
}

}  // namespace rollstock::testing
