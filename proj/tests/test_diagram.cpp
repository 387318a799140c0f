#include "rollstock/diagram.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace rollstock;
using namespace rollstock::testing;

namespace {

const std::string kToy = ROLLSTOCK_SOURCE_DIR "/instances/toy.json";

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Diagram, ToyOptimumHasCoupledLeg) {
  Pipeline p(load_instance_file(kToy));
  RotationPlan plan = trace_rotations(p.g, p.inst, {0, 2, 10});
  ASSERT_EQ(plan.rotations.size(), 2u);
  EXPECT_EQ(plan.rotations[0].trips, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(plan.rotations[1].trips, (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(plan.coupled(2));
  EXPECT_FALSE(plan.coupled(0));
  EXPECT_EQ(plan.rotations[0].start_depot, std::optional<std::size_t>{0});
  std::string svg = render_svg(p.inst, plan);
  EXPECT_EQ(count(svg, "class=\"coupled\""), 1u);
  EXPECT_EQ(count(svg, "class=\"rotation\""), 2u);
  std::string ascii = render_ascii(p.inst, plan);
  EXPECT_NE(ascii.find("tau3*"), std::string::npos);
  EXPECT_NE(ascii.find('='), std::string::npos);
}

TEST(Diagram, ExcitedSolutionDrawsServiceLeg) {
  Pipeline p(load_instance_file(kToy));
  RotationPlan plan = trace_rotations(p.g, p.inst, {0, 3, 6, 8});
  ASSERT_EQ(plan.rotations.size(), 2u);
  EXPECT_EQ(plan.rotations[0].trips, (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(plan.rotations[1].trips, (std::vector<std::size_t>{1, 2}));
  for (std::size_t t = 0; t < 4; ++t) EXPECT_FALSE(plan.coupled(t));
  std::string svg = render_svg(p.inst, plan);
  EXPECT_EQ(count(svg, "class=\"coupled\""), 0u);
  EXPECT_EQ(count(svg, "stroke-dasharray"), 1u);
  EXPECT_NE(render_ascii(p.inst, plan).find(':'), std::string::npos);
}

TEST(Diagram, EmptySolutionDrawsAxes) {
  Pipeline p(load_instance_file(kToy));
  RotationPlan plan = trace_rotations(p.g, p.inst, {});
  EXPECT_TRUE(plan.rotations.empty());
  std::string svg = render_svg(p.inst, plan);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find(">A</text>"), std::string::npos);
  EXPECT_NE(svg.find(">06:00</text>"), std::string::npos);
  EXPECT_EQ(count(svg, "class=\"rotation\""), 0u);
  EXPECT_NE(render_ascii(p.inst, plan).find("(no rotations)"), std::string::npos);
}

TEST(Diagram, RotationsCoverEveryTripOnce) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Pipeline p(random_small_instance(seed));
    ExactResult r = solve_exact(p.ilp);
    if (!r.solution) continue;
    RotationPlan plan = trace_rotations(p.g, p.inst, r.solution->decoded);
    std::vector<int> seen(p.inst.trips.size(), 0);
    for (const Rotation& rot : plan.rotations) {
      EXPECT_TRUE(rot.start_depot.has_value());
      for (std::size_t k = 1; k < rot.trips.size(); ++k)
        EXPECT_LE(p.inst.trips[rot.trips[k - 1]].arrive, p.inst.trips[rot.trips[k]].depart);
      for (std::size_t t : rot.trips) ++seen[t];
    }
    for (std::size_t t = 0; t < seen.size(); ++t) {
      if (p.inst.trips[t].obligatory) {
        EXPECT_GE(seen[t], 1);
      }
      EXPECT_EQ(seen[t], plan.units_on_trip[t]);
    }
  }
}

TEST(Diagram, Deterministic) {
  Pipeline p(load_instance_file(kToy));
  RotationPlan a = trace_rotations(p.g, p.inst, {0, 2, 10});
  RotationPlan b = trace_rotations(p.g, p.inst, {0, 2, 10});
  EXPECT_EQ(render_svg(p.inst, a), render_svg(p.inst, b));
  EXPECT_EQ(render_ascii(p.inst, a), render_ascii(p.inst, b));
}
