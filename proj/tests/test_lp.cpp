#include "rollstock/lp.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rollstock;
using namespace rollstock::testing;

namespace {

const std::string kToy = ROLLSTOCK_SOURCE_DIR "/instances/toy.json";

std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }
std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

}  // namespace

TEST(Lp, RelaxationBoundsIntegerOptimum) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    IlpModel m = random_model(rng, 4 + static_cast<std::size_t>(trial % 16));
    SolutionPortfolio brute = brute_force(m);
    auto lp = solve_lp_relaxation(m, zeros(m.num_vars), ones(m.num_vars));
    if (!brute.solutions.empty()) {
      ASSERT_TRUE(lp) << "trial " << trial;
      EXPECT_LE(lp->value, to_double(brute.solutions[0].objective) + 1e-7);
      // Reduced-cost bound with the root box is the LP value itself.
      std::vector<double> lo(lp->primal.size()), hi(lp->primal.size());
      for (std::size_t k = 0; k < lo.size(); ++k) {
        lo[k] = k < m.num_vars ? 0.0 : static_cast<double>(m.constraints[k - m.num_vars].lower());
        hi[k] = k < m.num_vars ? 1.0 : static_cast<double>(m.constraints[k - m.num_vars].upper());
      }
      EXPECT_LE(lp->bound(lo, hi), to_double(brute.solutions[0].objective) + 1e-7);
    }
  }
}

TEST(Lp, FixedBoxesEvaluateExactly) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    IlpModel m = random_model(rng, 10);
    Assignment x(m.num_vars);
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1);
    std::vector<double> fix(x.begin(), x.end());
    auto lp = solve_lp_relaxation(m, fix, fix);
    if (check_feasibility(m, x).feasible()) {
      ASSERT_TRUE(lp);
      EXPECT_NEAR(lp->value, to_double(objective_value(m, x)), 1e-9);
    } else {
      EXPECT_FALSE(lp);
    }
  }
}

TEST(Lp, ToyRelaxation) {
  Pipeline p(load_instance_file(kToy));
  auto lp = solve_lp_relaxation(p.ilp, zeros(11), ones(11));
  ASSERT_TRUE(lp);
  EXPECT_LE(lp->value, 4.8 + 1e-9);
  EXPECT_GE(lp->value, 2.0);
  for (std::size_t j = 0; j < 11; ++j) {
    EXPECT_GE(lp->primal[j], -1e-9);
    EXPECT_LE(lp->primal[j], 1 + 1e-9);
  }
}
