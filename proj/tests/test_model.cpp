#include "rollstock/generator.hpp"
#include "rollstock/model.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace rollstock;

namespace {

const std::string kToy = ROLLSTOCK_SOURCE_DIR "/instances/toy.json";

json toy_json() {
  std::ifstream in(kToy);
  return json::parse(in);
}

std::string error_path(const json& doc) {
  try {
    parse_instance(doc);
  } catch (const InstanceError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Rational, ParsesDecimalsAndFractions) {
  EXPECT_EQ(parse_rational("0.01"), Rational(1, 100));
  EXPECT_EQ(parse_rational("1/100"), Rational(1, 100));
  EXPECT_EQ(parse_rational("-2.5"), Rational(-5, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
}

TEST(Rational, PrintsExactDecimalsOrFractions) {
  EXPECT_EQ(to_string(Rational(24, 5)), "4.8");
  EXPECT_EQ(to_string(Rational(507, 250)), "2.028");
  EXPECT_EQ(to_string(Rational(2)), "2");
  EXPECT_EQ(to_string(Rational(1, 3)), "1/3");
  EXPECT_EQ(rational_from_double(0.01), Rational(1, 100));
}

TEST(Model, LoadsToy) {
  Instance inst = load_instance_file(kToy);
  ASSERT_EQ(inst.trips.size(), 4u);
  EXPECT_EQ(inst.trips[0].id, "tau1");
  EXPECT_EQ(inst.alpha, Rational(1, 100));
  EXPECT_EQ(inst.delta_min, 10);
  EXPECT_EQ(inst.delta_max, 60);
  EXPECT_EQ(inst.num_couplable_trips(), 1u);
  EXPECT_FALSE(inst.trips[3].obligatory);
  EXPECT_EQ(inst.emu_types[1].seats, 110);
  EXPECT_EQ(Depot::lookup(inst.depots[0].out_max, "r1"), 2);
  EXPECT_EQ(Depot::lookup(inst.depots[0].in_max, "r1"), 0);
  EXPECT_EQ(inst.driver_weighting, DriverWeighting::per_train);
}

TEST(Model, SerializeRoundTrips) {
  Instance inst = load_instance_file(kToy);
  Instance again = parse_instance(serialize_instance(inst));
  EXPECT_EQ(inst, again);
  EXPECT_EQ(serialize_instance(inst).dump(), serialize_instance(again).dump());
}

TEST(Model, GeneratedInstancesRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GeneratorConfig c;
    c.num_trips = 14;
    c.num_types = 2;
    c.num_couplable = 3;
    c.num_depots = 2;
    Instance inst = generate_synthetic(c, seed);
    EXPECT_EQ(parse_instance(serialize_instance(inst)), inst);
    EXPECT_EQ(serialize_instance(generate_synthetic(c, seed)).dump(), serialize_instance(inst).dump());
  }
}

TEST(Model, RejectsArrivalBeforeDeparture) {
  json doc = toy_json();
  doc["trips"][1]["arrive"] = 300;
  EXPECT_EQ(error_path(doc), "/trips/1/arrive");
}

TEST(Model, RejectsUnknownType) {
  json doc = toy_json();
  doc["trips"][2]["allowed_types"] = {"r9"};
  EXPECT_EQ(error_path(doc), "/trips/2/allowed_types/0");
}

TEST(Model, RejectsObligatoryTripWithoutTypes) {
  json doc = toy_json();
  doc["trips"][0]["allowed_types"] = json::array();
  EXPECT_EQ(error_path(doc), "/trips/0/allowed_types");
}

TEST(Model, RejectsDeltaOrder) {
  json doc = toy_json();
  doc["delta_min"] = 90;
  EXPECT_EQ(error_path(doc), "/delta_max");
}

TEST(Model, RejectsDepotRangeAndDuplicates) {
  json doc = toy_json();
  doc["depots"][0]["out_min"]["r2"] = 3;
  EXPECT_EQ(error_path(doc), "/depots/0/out_min/r2");
  doc = toy_json();
  doc["emu_types"][1]["id"] = "r1";
  EXPECT_EQ(error_path(doc), "/emu_types/1/id");
}

TEST(Model, RejectsMissingAndUnknownFields) {
  json doc = toy_json();
  doc["trips"][0].erase("depart");
  EXPECT_EQ(error_path(doc), "/trips/0/depart");
  doc = toy_json();
  doc["trips"][0]["colour"] = "red";
  EXPECT_EQ(error_path(doc), "/trips/0/colour");
}

TEST(Model, RejectsDriverWindowReferences) {
  json doc = toy_json();
  doc["driver_windows"][0]["depot"] = "X";
  EXPECT_EQ(error_path(doc), "/driver_windows/0/depot");
  doc = toy_json();
  doc["driver_windows"][1]["min_drivers"] = 3;
  EXPECT_EQ(error_path(doc), "/driver_windows/1/max_drivers");
}

TEST(Model, MissingFileNamesPath) {
  try {
    load_instance_file("/nonexistent/instance.json");
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/instance.json"), std::string::npos);
  }
}

TEST(Generator, RespectsConfig) {
  GeneratorConfig c;
  c.num_trips = 21;
  c.num_couplable = 5;
  c.num_types = 3;
  Instance inst = generate_synthetic(c, 42);
  EXPECT_EQ(inst.trips.size(), 21u);
  EXPECT_EQ(inst.num_couplable_trips(), 5u);
  EXPECT_EQ(inst.emu_types.size(), 3u);
  c.num_couplable = 30;
  EXPECT_THROW(generate_synthetic(c, 1), std::invalid_argument);
}
