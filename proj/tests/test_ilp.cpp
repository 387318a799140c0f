#include "rollstock/ilp.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

using namespace rollstock;
using namespace rollstock::testing;

namespace {

const std::string kToy = ROLLSTOCK_SOURCE_DIR "/instances/toy.json";

/// Minimal reader for the LP subset we write: one objective line, one
/// constraint per line, binaries only.
struct LpFile {
  std::map<std::string, Rational> objective;
  struct Row {
    std::map<std::string, Rational> coeffs;
    std::string sense;
    Rational rhs;
  };
  std::vector<Row> rows;
  std::vector<std::string> binaries;

  static std::map<std::string, Rational> parse_terms(std::istringstream& in, std::string& stop) {
    std::map<std::string, Rational> out;
    std::string tok;
    Rational sign = 1;
    while (in >> tok) {
      if (tok == "=" || tok == "<=" || tok == ">=") {
        stop = tok;
        break;
      }
      if (tok == "+") continue;
      if (tok == "-") {
        sign = -1;
        continue;
      }
      Rational coef = 1;
      if (tok[0] != 'x') {
        if (tok[0] == '+') tok = tok.substr(1);
        if (tok[0] == '-') {
          sign = -sign;
          tok = tok.substr(1);
        }
        coef = parse_rational(tok);
        in >> tok;
      }
      out[tok] += sign * coef;
      sign = 1;
    }
    return out;
  }

  explicit LpFile(const std::string& text) {
    std::istringstream lines(text);
    std::string line, section;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '\\') continue;
      if (line[0] != ' ') {
        section = line;
        continue;
      }
      std::istringstream in(line);
      if (section == "Minimize") {
        std::string name, stop;
        in >> name;
        objective = parse_terms(in, stop);
      } else if (section == "Subject To") {
        std::string name;
        in >> name;
        Row r;
        r.coeffs = parse_terms(in, r.sense);
        std::string rhs;
        in >> rhs;
        r.rhs = parse_rational(rhs);
        rows.push_back(r);
      } else if (section == "Binary") {
        std::string v;
        in >> v;
        binaries.push_back(v);
      }
    }
  }

  Rational value(const Assignment& x) const {
    Rational v = 0;
    for (const auto& [name, c] : objective)
      if (x[std::stoul(name.substr(1))]) v += c;
    return v;
  }
  bool feasible(const Assignment& x) const {
    for (const Row& r : rows) {
      Rational lhs = 0;
      for (const auto& [name, c] : r.coeffs)
        if (x[std::stoul(name.substr(1))]) lhs += c;
      if (r.sense == "=" && lhs != r.rhs) return false;
      if (r.sense == "<=" && lhs > r.rhs) return false;
      if (r.sense == ">=" && lhs < r.rhs) return false;
    }
    return true;
  }
};

Assignment random_assignment(std::mt19937_64& rng, std::size_t n, int density) {
  Assignment x(n);
  for (auto& b : x) b = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 99)(rng) < density);
  return x;
}

}  // namespace

TEST(Ilp, ToyRows) {
  Pipeline p(load_instance_file(kToy));
  const IlpModel& m = p.ilp;
  EXPECT_EQ(m.num_vars, 11u);
  EXPECT_EQ(m.constraints.size(), 14u);
  EXPECT_EQ(m.count(RowKind::coverage), 3u);
  EXPECT_EQ(m.count(RowKind::flow_balance), 4u);
  EXPECT_EQ(m.count(RowKind::out_degree), 2u);
  EXPECT_EQ(m.count(RowKind::depot_out), 2u);
  EXPECT_EQ(m.count(RowKind::depot_in), 0u);
  EXPECT_EQ(m.count(RowKind::capacity_forbid), 1u);
  EXPECT_EQ(m.count(RowKind::driver), 2u);

  auto row = [&](const std::string& tag) -> const ConstraintRow& {
    for (const auto& r : m.constraints)
      if (r.tag == tag) return r;
    throw std::runtime_error("no row " + tag);
  };
  EXPECT_EQ(row("coverage:tau3").coeffs, (std::vector<Term>{{4, 1}, {5, 1}, {7, 1}, {8, 1}, {10, 1}}));
  EXPECT_EQ(row("flow:tau1:r1").coeffs, (std::vector<Term>{{0, 1}, {4, -1}, {6, -1}, {10, -1}}));
  EXPECT_EQ(row("capacity").coeffs, (std::vector<Term>{{4, 1}, {7, 1}}));
  EXPECT_EQ(row("capacity").upper(), 0);
  EXPECT_EQ(row("depot_out:D:r1").upper(), 2);
  EXPECT_EQ(row("depot_out:D:r2").upper(), 1);
  EXPECT_EQ(row("driver:D@470").coeffs.size(), 7u);
  EXPECT_EQ(row("out:tau2").relation, Relation::le);
}

TEST(Ilp, ToyObjectiveCoefficients) {
  Pipeline p(load_instance_file(kToy));
  const std::vector<std::string> expected = {"1.7", "2.1", "1.7", "2.1", "0.7", "1.1",
                                             "0.7", "0.7", "1.1", "0.7", "1.4"};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(to_string(p.ilp.objective[i]), expected[i]) << i;
  EXPECT_EQ(objective_value(p.ilp, with_ones(11, {0, 2, 10})), Rational(24, 5));
  EXPECT_EQ(objective_value(p.ilp, with_ones(11, {0, 3, 6, 8})), Rational(28, 5));
  EXPECT_EQ(objective_value(p.ilp, with_ones(11, {1, 2, 5, 9})), Rational(28, 5));
}

TEST(Ilp, ToyFeasibilityReport) {
  Pipeline p(load_instance_file(kToy));
  EXPECT_TRUE(check_feasibility(p.ilp, with_ones(11, {0, 2, 10})).feasible());
  FeasibilityReport r = check_feasibility(p.ilp, with_ones(11, {0, 2, 6, 7}));
  EXPECT_EQ(r.violated_families(), std::vector<RowKind>{RowKind::capacity_forbid});
  FeasibilityReport zero = check_feasibility(p.ilp, Assignment(11, 0));
  EXPECT_EQ(zero.of(RowKind::coverage).size(), 3u);
  EXPECT_THROW(check_feasibility(p.ilp, Assignment(10, 0)), std::invalid_argument);
  EXPECT_THROW(objective_value(p.ilp, Assignment(12, 0)), std::invalid_argument);
}

TEST(Ilp, AlphaScalesCosts) {
  Instance inst = load_instance_file(kToy);
  inst.alpha = 0;
  Pipeline p(inst);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(p.ilp.objective[i], 1);
  for (std::size_t i = 4; i < 11; ++i) EXPECT_EQ(p.ilp.objective[i], 0);
}

TEST(Ilp, LpExportAgreesWithModel) {
  std::mt19937_64 rng(5);
  std::vector<IlpModel> models = {Pipeline(load_instance_file(kToy)).ilp};
  for (std::uint64_t s = 1; s <= 10; ++s) models.push_back(Pipeline(random_small_instance(s)).ilp);
  for (const IlpModel& m : models) {
    LpFile lp(export_lp(m));
    EXPECT_EQ(lp.binaries.size(), m.num_vars);
    for (int trial = 0; trial < 300; ++trial) {
      Assignment x = random_assignment(rng, m.num_vars, trial % 2 ? 10 : 40);
      EXPECT_EQ(lp.value(x), objective_value(m, x));
      EXPECT_EQ(lp.feasible(x), check_feasibility(m, x).feasible());
    }
    for (const Solution& s : enumerate_feasible(m, 50).solutions) EXPECT_TRUE(lp.feasible(s.x));
  }
}

TEST(Ilp, LpExportToyText) {
  std::string lp = export_lp(Pipeline(load_instance_file(kToy)).ilp);
  EXPECT_NE(lp.find(" obj: +1.7 x0 +2.1 x1 +1.7 x2"), std::string::npos);
  EXPECT_NE(lp.find("c2_coverage_tau3: + 1 x4 + 1 x5 + 1 x7 + 1 x8 + 1 x10 = 1"), std::string::npos);
  EXPECT_NE(lp.find("c3_flow_tau1_r1: + 1 x0 - 1 x4 - 1 x6 - 1 x10 = 0"), std::string::npos);
  EXPECT_NE(lp.find("End"), std::string::npos);
}

TEST(Ilp, LicensedDriversMatchBruteForce) {
  Instance inst = load_instance_file(kToy);
  inst.licenses.push_back(License{"big", {"r2"}, {}});
  inst.licenses.push_back(License{"any", {}, {}});
  inst.driver_windows.push_back(DriverWindow{"D", 470, 0, 0, "big"});
  inst.driver_windows.push_back(DriverWindow{"D", 370, 1, 1, "any"});
  validate(inst);
  Pipeline p(inst);
  Pipeline base(load_instance_file(kToy));
  ASSERT_EQ(p.ilp.count(RowKind::driver), 4u);

  // Licensed rows, written per trip: trips running at the checkpoint and
  // crewed from D, counted once per covering arc whose type needs the license.
  auto licensed_ok = [&](const Assignment& x) {
    for (const DriverWindow& w : inst.driver_windows) {
      if (!w.license) continue;
      int count = 0;
      for (std::size_t t = 0; t < inst.trips.size(); ++t) {
        const Trip& trip = inst.trips[t];
        if (!trip.running_at(w.at) || trip.driver_depot != w.depot) continue;
        for (ArcId a : p.g.idx_cover[t]) {
          if (!x[a]) continue;
          const std::string& type = inst.emu_types[p.g.arcs[a].emu_type].id;
          const License* need = nullptr;
          for (const License& l : inst.licenses)
            if (!need && l.matches(type, trip.line)) need = &l;
          if (need && need->id == *w.license) ++count;
        }
      }
      if (count < w.min_drivers || count > w.max_drivers) return false;
    }
    return true;
  };
  std::size_t agree = 0;
  for (std::uint32_t bits = 0; bits < (1u << 11); ++bits) {
    Assignment x(11);
    for (std::size_t i = 0; i < 11; ++i) x[i] = (bits >> i) & 1;
    bool expected = check_feasibility(base.ilp, x).feasible() && licensed_ok(x);
    EXPECT_EQ(check_feasibility(p.ilp, x).feasible(), expected);
    agree += expected;
  }
  // tau1 must run on r1 and tau3 must not run on r2: only the optimum remains.
  EXPECT_EQ(agree, 1u);
}

TEST(Ilp, EmptyRowsThatAdmitZeroAreSkipped) {
  Pipeline p(load_instance_file(kToy));
  for (const auto& r : p.ilp.constraints) EXPECT_FALSE(r.coeffs.empty()) << r.tag;
}

TEST(Ilp, InfeasibleEmptyRowIsKept) {
  Instance inst = load_instance_file(kToy);
  inst.depots[0].in_min["r1"] = 1;
  inst.depots[0].in_max["r1"] = 1;
  inst.depots[0].in_max["r2"] = 0;
  inst.trips[2].destination = "B";
  inst.trips[3].destination = "B";
  Pipeline p(inst);
  bool found = false;
  for (const auto& r : p.ilp.constraints)
    if (r.kind == RowKind::depot_in && r.coeffs.empty()) found = r.lower() == 1;
  EXPECT_TRUE(found);
}
