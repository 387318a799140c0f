#include "rollstock/exact.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rollstock;
using namespace rollstock::testing;

namespace {

const std::string kToy = ROLLSTOCK_SOURCE_DIR "/instances/toy.json";

Rational toy_optimum(const std::string& alpha) {
  Instance inst = load_instance_file(kToy);
  inst.alpha = parse_rational(alpha);
  Pipeline p(inst);
  ExactResult r = solve_exact(p.ilp);
  EXPECT_EQ(r.status, SolveStatus::optimal);
  return r.solution->objective;
}

}  // namespace

TEST(Exact, ToyOptimum) {
  Pipeline p(load_instance_file(kToy));
  ExactResult r = solve_exact(p.ilp);
  ASSERT_EQ(r.status, SolveStatus::optimal);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.solution->objective, Rational(24, 5));
  EXPECT_EQ(ones_of(r.solution->x), (std::set<std::size_t>{0, 2, 10}));
  EXPECT_TRUE(r.solution->report.feasible());
  EXPECT_EQ(r.solution->decoded, (std::vector<ArcId>{0, 2, 10}));
  ASSERT_TRUE(r.lower_bound);
  EXPECT_LE(*r.lower_bound, Rational(24, 5));
}

TEST(Exact, ToyAlphaSweep) {
  EXPECT_EQ(toy_optimum("0.01"), Rational(24, 5));
  EXPECT_EQ(toy_optimum("0"), Rational(2));
  EXPECT_EQ(toy_optimum("0.0001"), Rational(507, 250));
}

TEST(Exact, ToyEnumeration) {
  Pipeline p(load_instance_file(kToy));
  SolutionPortfolio all = enumerate_feasible(p.ilp, 100);
  EXPECT_TRUE(all.exhaustive);
  ASSERT_EQ(all.solutions.size(), 3u);
  EXPECT_EQ(ones_of(all.solutions[0].x), (std::set<std::size_t>{0, 2, 10}));
  EXPECT_EQ(ones_of(all.solutions[1].x), (std::set<std::size_t>{0, 3, 6, 8}));
  EXPECT_EQ(ones_of(all.solutions[2].x), (std::set<std::size_t>{1, 2, 5, 9}));
  EXPECT_EQ(all.solutions[1].objective, Rational(28, 5));
  EXPECT_EQ(all.solutions[2].objective, Rational(28, 5));

  SolutionPortfolio brute = brute_force(p.ilp);
  ASSERT_EQ(brute.solutions.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(brute.solutions[i].x, all.solutions[i].x);

  SolutionPortfolio capped = enumerate_feasible(p.ilp, 2);
  EXPECT_FALSE(capped.exhaustive);
  EXPECT_EQ(capped.solutions.size(), 2u);
}

TEST(Exact, AgreesWithBruteForceOnRandomModels) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + static_cast<std::size_t>(trial % 20);
    IlpModel m = random_model(rng, n);
    SolutionPortfolio brute = brute_force(m);
    ExactResult r = solve_exact(m);
    SolutionPortfolio all = enumerate_feasible(m, 1u << 22);
    ASSERT_TRUE(all.exhaustive);
    EXPECT_EQ(all.solutions.size(), brute.solutions.size()) << "trial " << trial;
    if (brute.solutions.empty()) {
      EXPECT_EQ(r.status, SolveStatus::infeasible);
      continue;
    }
    ASSERT_EQ(r.status, SolveStatus::optimal) << "trial " << trial;
    EXPECT_EQ(r.solution->objective, brute.solutions[0].objective) << "trial " << trial;
    for (std::size_t i = 0; i < brute.solutions.size(); ++i)
      EXPECT_EQ(all.solutions[i].objective, brute.solutions[i].objective);
  }
}

TEST(Exact, NegativeCostsStillExact) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    IlpModel m = random_model(rng, 12);
    for (auto& c : m.objective)
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) c = -c;
    SolutionPortfolio brute = brute_force(m);
    ExactResult r = solve_exact(m);
    if (brute.solutions.empty()) {
      EXPECT_EQ(r.status, SolveStatus::infeasible);
      continue;
    }
    EXPECT_EQ(r.solution->objective, brute.solutions[0].objective);
  }
}

TEST(Exact, AgreesWithBruteForceOnSmallInstances) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 200 && checked < 15; ++seed) {
    Pipeline p(random_small_instance(seed, 6));
    if (p.ilp.num_vars > 20) continue;
    ++checked;
    SolutionPortfolio brute = brute_force(p.ilp);
    ExactResult r = solve_exact(p.ilp);
    EXPECT_EQ(enumerate_feasible(p.ilp, 1u << 20).solutions.size(), brute.solutions.size());
    if (!brute.solutions.empty()) {
      EXPECT_EQ(r.solution->objective, brute.solutions[0].objective);
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Exact, InfeasibleInstance) {
  Instance inst = load_instance_file(kToy);
  inst.trips[0].allowed_types = {"r1"};
  inst.depots[0].out_max["r1"] = 0;
  Pipeline p(inst);
  EXPECT_EQ(solve_exact(p.ilp).status, SolveStatus::infeasible);
  EXPECT_TRUE(enumerate_feasible(p.ilp, 10).solutions.empty());
}

TEST(Exact, MonotoneInDeltaMax) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Instance inst = random_small_instance(seed);
    std::optional<Rational> previous;
    for (int delta : {120, 90, 60, 40}) {
      if (delta < inst.delta_min) break;
      inst.delta_max = delta;
      ExactResult r = solve_exact(Pipeline(inst).ilp);
      if (!r.solution) break;
      if (previous) {
        EXPECT_GE(r.solution->objective, *previous);
      }
      previous = r.solution->objective;
    }
  }
}

TEST(Exact, LargerInstanceWithinTimeLimit) {
  GeneratorConfig c;
  c.num_trips = 40;
  c.num_types = 3;
  c.num_couplable = 8;
  Pipeline p(generate_synthetic(c, 7));
  ExactResult r = solve_exact(p.ilp, 60);
  EXPECT_EQ(r.status, SolveStatus::optimal);
  ASSERT_TRUE(r.lp_bound);
  EXPECT_LE(*r.lp_bound, to_double(r.solution->objective) + 1e-6);
}

TEST(Exact, BruteForceRejectsLargeModels) {
  IlpModel m;
  m.num_vars = 25;
  m.objective.assign(25, 0);
  EXPECT_THROW(brute_force(m), std::invalid_argument);
}

TEST(Exact, PortfolioOrdering) {
  std::mt19937_64 rng(3);
  IlpModel m = random_model(rng, 14);
  SolutionPortfolio all = enumerate_feasible(m, 10000);
  for (std::size_t i = 1; i < all.solutions.size(); ++i)
    EXPECT_LE(all.solutions[i - 1].objective, all.solutions[i].objective);
}
