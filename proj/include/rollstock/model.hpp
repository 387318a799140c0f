#pragma once

// Problem input for daily rolling-stock circulation: timetable, fleet,
// depots, driver checkpoints and tolerances, plus the JSON instance format.

#include "rollstock/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rollstock {

using json = nlohmann::json;

/// Minutes since midnight of the planning day.
using Minute = int;

/// Acceptable shortage for a trip served by one EMU / by a coupled pair.
struct Tolerance {
  int single = 0;
  int coupled = 0;

  int for_units(int units) const { return units >= 2 ? coupled : single; }
  bool operator==(const Tolerance&) const = default;
};

struct Trip {
  std::string id;
  std::string origin;
  std::string destination;
  Minute depart = 0;
  Minute arrive = 0;
  int passengers = 0;
  int bicycles = 0;
  bool couplable = false;  // member of the coupling subset T''
  std::vector<std::string> allowed_types;
  Rational distance = 0;
  bool obligatory = true;
  std::optional<std::string> driver_depot;
  std::optional<std::string> line;
  std::optional<Tolerance> seat_tolerance;
  std::optional<Tolerance> bike_tolerance;

  bool admits(std::string_view type) const {
    return std::find(allowed_types.begin(), allowed_types.end(), type) != allowed_types.end();
  }
  bool running_at(Minute t) const { return depart <= t && t < arrive; }
  bool operator==(const Trip&) const = default;
};

struct EmuType {
  std::string id;
  int seats = 1;
  int bike_slots = 0;
  Rational cost_per_km = 0;
  bool couplable = false;

  bool operator==(const EmuType&) const = default;
};

/// Per-type dispatch (out) and return (in) ranges; types absent from a map
/// default to 0.
struct Depot {
  std::string id;
  std::string station;
  std::map<std::string, int> out_min;
  std::map<std::string, int> out_max;
  std::map<std::string, int> in_min;
  std::map<std::string, int> in_max;

  static int lookup(const std::map<std::string, int>& bounds, const std::string& type) {
    auto it = bounds.find(type);
    return it == bounds.end() ? 0 : it->second;
  }
  bool operator==(const Depot&) const = default;
};

struct DriverWindow {
  std::string depot;
  Minute at = 0;
  int min_drivers = 0;
  int max_drivers = 0;
  std::optional<std::string> license;

  bool operator==(const DriverWindow&) const = default;
};

/// Arcs whose EMU type and target line match the filters require this
/// license; an empty filter matches everything.
struct License {
  std::string id;
  std::vector<std::string> emu_types;
  std::vector<std::string> lines;

  bool matches(std::string_view type, const std::optional<std::string>& line) const {
    bool type_ok = emu_types.empty() ||
                   std::find(emu_types.begin(), emu_types.end(), type) != emu_types.end();
    bool line_ok = lines.empty() ||
                   (line && std::find(lines.begin(), lines.end(), *line) != lines.end());
    return type_ok && line_ok;
  }
  bool operator==(const License&) const = default;
};

enum class DriverWeighting { per_emu, per_train };

struct Instance {
  json meta = json::object();
  Rational alpha = 0;
  Minute delta_min = 0;
  Minute delta_max = 0;
  Tolerance seat_tolerance;
  Tolerance bike_tolerance;
  DriverWeighting driver_weighting = DriverWeighting::per_emu;
  std::vector<std::string> stations;  // optional display order
  std::vector<EmuType> emu_types;
  std::vector<Depot> depots;
  std::vector<Trip> trips;
  std::vector<DriverWindow> driver_windows;
  std::vector<License> licenses;

  std::optional<std::size_t> type_index(std::string_view id) const {
    for (std::size_t i = 0; i < emu_types.size(); ++i)
      if (emu_types[i].id == id) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> depot_index(std::string_view id) const {
    for (std::size_t i = 0; i < depots.size(); ++i)
      if (depots[i].id == id) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> trip_index(std::string_view id) const {
    for (std::size_t i = 0; i < trips.size(); ++i)
      if (trips[i].id == id) return i;
    return std::nullopt;
  }

  Tolerance seat_tolerance_for(const Trip& trip) const {
    return trip.seat_tolerance.value_or(seat_tolerance);
  }
  Tolerance bike_tolerance_for(const Trip& trip) const {
    return trip.bike_tolerance.value_or(bike_tolerance);
  }

  std::size_t num_couplable_trips() const {
    return static_cast<std::size_t>(
        std::count_if(trips.begin(), trips.end(), [](const Trip& t) { return t.couplable; }));
  }

  /// Stations in display order: the explicit list when given, otherwise
  /// order of first appearance among depots and trips.
  std::vector<std::string> station_order() const {
    if (!stations.empty()) return stations;
    std::vector<std::string> order;
    auto add = [&](const std::string& s) {
      if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
    };
    for (const auto& d : depots) add(d.station);
    for (const auto& t : trips) {
      add(t.origin);
      add(t.destination);
    }
    return order;
  }

  bool operator==(const Instance&) const = default;
};

/// Schema, reference or invariant violation; `path()` is a JSON pointer to
/// the offending value.
class InstanceError : public std::runtime_error {
 public:
  InstanceError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

inline std::string to_string(DriverWeighting w) {
  return w == DriverWeighting::per_emu ? "per_emu" : "per_train";
}

namespace detail {

inline std::string pointer(const std::string& base, std::string_view key) {
  return base + "/" + std::string(key);
}
inline std::string pointer(const std::string& base, std::size_t index) {
  return base + "/" + std::to_string(index);
}

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw InstanceError(path_.empty() ? "/" : path_, "expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
        throw InstanceError(pointer(path_, it.key()), "unknown field");
    }
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)); }

  const json& require(std::string_view key) const {
    auto it = node_.find(std::string(key));
    if (it == node_.end()) throw InstanceError(pointer(path_, key), "missing required field");
    return *it;
  }

  std::string string(std::string_view key) const {
    const json& v = require(key);
    if (!v.is_string()) throw InstanceError(pointer(path_, key), "expected a string");
    return v.get<std::string>();
  }
  std::optional<std::string> optional_string(std::string_view key) const {
    if (!has(key) || node_.at(std::string(key)).is_null()) return std::nullopt;
    return string(key);
  }

  int integer(std::string_view key) const { return as_int(require(key), pointer(path_, key)); }
  int integer_or(std::string_view key, int fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  bool boolean_or(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(std::string(key));
    if (!v.is_boolean()) throw InstanceError(pointer(path_, key), "expected a boolean");
    return v.get<bool>();
  }

  Rational rational(std::string_view key) const {
    return as_rational(require(key), pointer(path_, key));
  }

  std::vector<std::string> strings(std::string_view key) const {
    const json& v = require(key);
    std::string p = pointer(path_, key);
    if (!v.is_array()) throw InstanceError(p, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw InstanceError(pointer(p, i), "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }
  std::vector<std::string> strings_or_empty(std::string_view key) const {
    return has(key) ? strings(key) : std::vector<std::string>{};
  }

  std::map<std::string, int> int_map_or_empty(std::string_view key) const {
    std::map<std::string, int> out;
    if (!has(key)) return out;
    const json& v = node_.at(std::string(key));
    std::string p = pointer(path_, key);
    if (!v.is_object()) throw InstanceError(p, "expected an object of integers");
    for (auto it = v.begin(); it != v.end(); ++it) out[it.key()] = as_int(it.value(), pointer(p, it.key()));
    return out;
  }

  const json& array(std::string_view key) const {
    const json& v = require(key);
    if (!v.is_array()) throw InstanceError(pointer(path_, key), "expected an array");
    return v;
  }

  const std::string& path() const { return path_; }

  static int as_int(const json& v, const std::string& p) {
    if (v.is_number_integer()) {
      auto value = v.get<std::int64_t>();
      if (value < INT32_MIN || value > INT32_MAX) throw InstanceError(p, "integer out of range");
      return static_cast<int>(value);
    }
    if (v.is_number_float()) {
      double d = v.get<double>();
      if (d == static_cast<double>(static_cast<int>(d))) return static_cast<int>(d);
    }
    throw InstanceError(p, "expected an integer");
  }

  static Rational as_rational(const json& v, const std::string& p) {
    try {
      if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
      if (v.is_number_unsigned()) return Rational(v.get<std::uint64_t>());
      if (v.is_number_float()) return rational_from_double(v.get<double>());
      if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InstanceError(p, e.what());
    }
    throw InstanceError(p, "expected a number or a rational string");
  }

 private:
  const json& node_;
  std::string path_;
};

inline Tolerance read_tolerance(const json& node, const std::string& path) {
  Reader r(node, path);
  r.allow_only({"single", "coupled"});
  return Tolerance{r.integer("single"), r.integer("coupled")};
}

inline json rational_json(const Rational& v) {
  if (boost::multiprecision::denominator(v) == 1) {
    BigInt n = boost::multiprecision::numerator(v);
    if (n >= INT64_MIN && n <= INT64_MAX) return json(n.convert_to<std::int64_t>());
  }
  std::string text = to_string(v);
  if (text.find('/') == std::string::npos) {
    // Exact decimal; emit as a JSON number only when it round-trips.
    double d = std::stod(text);
    if (rational_from_double(d) == v) return json(d);
  }
  return json(text);
}

}  // namespace detail

/// Checks every invariant and cross-reference; throws InstanceError.
inline void validate(const Instance& inst) {
  using detail::pointer;
  if (inst.alpha < 0) throw InstanceError("/alpha", "must be nonnegative");
  if (inst.delta_min < 0) throw InstanceError("/delta_min", "must be nonnegative");
  if (inst.delta_min > inst.delta_max)
    throw InstanceError("/delta_max", "delta_min must not exceed delta_max");
  for (auto [name, tol] : {std::pair{"seat", inst.seat_tolerance}, std::pair{"bike", inst.bike_tolerance}}) {
    if (tol.single < 0) throw InstanceError(std::string("/tolerances/") + name + "_single", "must be nonnegative");
    if (tol.coupled < 0) throw InstanceError(std::string("/tolerances/") + name + "_coupled", "must be nonnegative");
  }

  std::set<std::string> seen;
  for (std::size_t i = 0; i < inst.emu_types.size(); ++i) {
    const auto& ty = inst.emu_types[i];
    std::string p = pointer("/emu_types", i);
    if (!seen.insert(ty.id).second) throw InstanceError(pointer(p, "id"), "duplicate EMU type id '" + ty.id + "'");
    if (ty.seats <= 0) throw InstanceError(pointer(p, "seats"), "must be positive");
    if (ty.bike_slots < 0) throw InstanceError(pointer(p, "bike_slots"), "must be nonnegative");
    if (ty.cost_per_km < 0) throw InstanceError(pointer(p, "cost_per_km"), "must be nonnegative");
  }

  std::set<std::string> station_set(inst.stations.begin(), inst.stations.end());
  if (station_set.size() != inst.stations.size()) throw InstanceError("/stations", "duplicate station id");
  auto check_station = [&](const std::string& s, const std::string& p) {
    if (!inst.stations.empty() && !station_set.count(s))
      throw InstanceError(p, "unknown station '" + s + "'");
  };

  seen.clear();
  for (std::size_t i = 0; i < inst.depots.size(); ++i) {
    const auto& d = inst.depots[i];
    std::string p = pointer("/depots", i);
    if (!seen.insert(d.id).second) throw InstanceError(pointer(p, "id"), "duplicate depot id '" + d.id + "'");
    check_station(d.station, pointer(p, "station"));
    for (auto [key, bounds] : {std::pair{"out_min", &d.out_min}, std::pair{"out_max", &d.out_max},
                               std::pair{"in_min", &d.in_min}, std::pair{"in_max", &d.in_max}}) {
      for (const auto& [type, value] : *bounds) {
        std::string bp = pointer(pointer(p, key), type);
        if (!inst.type_index(type)) throw InstanceError(bp, "unknown EMU type '" + type + "'");
        if (value < 0) throw InstanceError(bp, "must be nonnegative");
      }
    }
    for (const auto& ty : inst.emu_types) {
      if (Depot::lookup(d.out_min, ty.id) > Depot::lookup(d.out_max, ty.id))
        throw InstanceError(pointer(pointer(p, "out_min"), ty.id), "out_min exceeds out_max");
      if (Depot::lookup(d.in_min, ty.id) > Depot::lookup(d.in_max, ty.id))
        throw InstanceError(pointer(pointer(p, "in_min"), ty.id), "in_min exceeds in_max");
    }
  }

  seen.clear();
  for (std::size_t i = 0; i < inst.licenses.size(); ++i) {
    const auto& l = inst.licenses[i];
    std::string p = pointer("/licenses", i);
    if (!seen.insert(l.id).second) throw InstanceError(pointer(p, "id"), "duplicate license id '" + l.id + "'");
    for (std::size_t j = 0; j < l.emu_types.size(); ++j)
      if (!inst.type_index(l.emu_types[j]))
        throw InstanceError(pointer(pointer(p, "emu_types"), j), "unknown EMU type '" + l.emu_types[j] + "'");
  }

  seen.clear();
  for (std::size_t i = 0; i < inst.trips.size(); ++i) {
    const auto& t = inst.trips[i];
    std::string p = pointer("/trips", i);
    if (!seen.insert(t.id).second) throw InstanceError(pointer(p, "id"), "duplicate trip id '" + t.id + "'");
    check_station(t.origin, pointer(p, "origin"));
    check_station(t.destination, pointer(p, "destination"));
    if (t.arrive <= t.depart) throw InstanceError(pointer(p, "arrive"), "arrival must be after departure");
    if (t.passengers < 0) throw InstanceError(pointer(p, "passengers"), "must be nonnegative");
    if (t.bicycles < 0) throw InstanceError(pointer(p, "bicycles"), "must be nonnegative");
    if (t.distance < 0) throw InstanceError(pointer(p, "distance"), "must be nonnegative");
    if (t.obligatory && t.allowed_types.empty())
      throw InstanceError(pointer(p, "allowed_types"), "obligatory trip needs at least one EMU type");
    for (std::size_t j = 0; j < t.allowed_types.size(); ++j)
      if (!inst.type_index(t.allowed_types[j]))
        throw InstanceError(pointer(pointer(p, "allowed_types"), j),
                            "unknown EMU type '" + t.allowed_types[j] + "'");
    if (t.driver_depot && !inst.depot_index(*t.driver_depot))
      throw InstanceError(pointer(p, "driver_depot"), "unknown depot '" + *t.driver_depot + "'");
    for (auto [key, tol] : {std::pair{"seat_tolerance", &t.seat_tolerance}, std::pair{"bike_tolerance", &t.bike_tolerance}})
      if (*tol && ((*tol)->single < 0 || (*tol)->coupled < 0))
        throw InstanceError(pointer(p, key), "must be nonnegative");
  }

  for (std::size_t i = 0; i < inst.driver_windows.size(); ++i) {
    const auto& w = inst.driver_windows[i];
    std::string p = pointer("/driver_windows", i);
    if (!inst.depot_index(w.depot)) throw InstanceError(pointer(p, "depot"), "unknown depot '" + w.depot + "'");
    if (w.min_drivers < 0) throw InstanceError(pointer(p, "min_drivers"), "must be nonnegative");
    if (w.min_drivers > w.max_drivers) throw InstanceError(pointer(p, "max_drivers"), "min_drivers exceeds max_drivers");
    if (w.license && std::none_of(inst.licenses.begin(), inst.licenses.end(),
                                  [&](const License& l) { return l.id == *w.license; }))
      throw InstanceError(pointer(p, "license"), "unknown license '" + *w.license + "'");
  }
}

/// Builds and validates an Instance from parsed JSON.
inline Instance parse_instance(const json& root) {
  using detail::pointer;
  using detail::Reader;
  Reader top(root, "");
  top.allow_only({"meta", "alpha", "delta_min", "delta_max", "tolerances", "driver_weighting", "stations",
                  "emu_types", "depots", "trips", "driver_windows", "licenses"});

  Instance inst;
  if (top.has("meta")) {
    inst.meta = root.at("meta");
    if (!inst.meta.is_object()) throw InstanceError("/meta", "expected an object");
  }
  inst.alpha = top.rational("alpha");
  inst.delta_min = top.integer("delta_min");
  inst.delta_max = top.integer("delta_max");
  {
    Reader tol(top.require("tolerances"), "/tolerances");
    tol.allow_only({"seat_single", "seat_coupled", "bike_single", "bike_coupled"});
    inst.seat_tolerance = {tol.integer("seat_single"), tol.integer("seat_coupled")};
    inst.bike_tolerance = {tol.integer_or("bike_single", 0), tol.integer_or("bike_coupled", 0)};
  }
  if (auto w = top.optional_string("driver_weighting")) {
    if (*w == "per_emu") inst.driver_weighting = DriverWeighting::per_emu;
    else if (*w == "per_train") inst.driver_weighting = DriverWeighting::per_train;
    else throw InstanceError("/driver_weighting", "expected 'per_emu' or 'per_train'");
  }
  inst.stations = top.strings_or_empty("stations");

  const json& types = top.array("emu_types");
  for (std::size_t i = 0; i < types.size(); ++i) {
    Reader r(types[i], pointer("/emu_types", i));
    r.allow_only({"id", "seats", "bike_slots", "cost_per_km", "couplable"});
    inst.emu_types.push_back(EmuType{r.string("id"), r.integer("seats"), r.integer_or("bike_slots", 0),
                                     r.rational("cost_per_km"), r.boolean_or("couplable", false)});
  }

  const json& depots = top.array("depots");
  for (std::size_t i = 0; i < depots.size(); ++i) {
    Reader r(depots[i], pointer("/depots", i));
    r.allow_only({"id", "station", "out_min", "out_max", "in_min", "in_max"});
    inst.depots.push_back(Depot{r.string("id"), r.string("station"), r.int_map_or_empty("out_min"),
                                r.int_map_or_empty("out_max"), r.int_map_or_empty("in_min"),
                                r.int_map_or_empty("in_max")});
  }

  const json& trips = top.array("trips");
  for (std::size_t i = 0; i < trips.size(); ++i) {
    std::string p = pointer("/trips", i);
    Reader r(trips[i], p);
    r.allow_only({"id", "origin", "destination", "depart", "arrive", "passengers", "bicycles", "couplable",
                  "allowed_types", "distance", "obligatory", "driver_depot", "line", "seat_tolerance",
                  "bike_tolerance"});
    Trip t;
    t.id = r.string("id");
    t.origin = r.string("origin");
    t.destination = r.string("destination");
    t.depart = r.integer("depart");
    t.arrive = r.integer("arrive");
    t.passengers = r.integer("passengers");
    t.bicycles = r.integer_or("bicycles", 0);
    t.couplable = r.boolean_or("couplable", false);
    t.allowed_types = r.strings("allowed_types");
    t.distance = r.rational("distance");
    t.obligatory = r.boolean_or("obligatory", true);
    t.driver_depot = r.optional_string("driver_depot");
    t.line = r.optional_string("line");
    if (r.has("seat_tolerance")) t.seat_tolerance = detail::read_tolerance(r.require("seat_tolerance"), pointer(p, "seat_tolerance"));
    if (r.has("bike_tolerance")) t.bike_tolerance = detail::read_tolerance(r.require("bike_tolerance"), pointer(p, "bike_tolerance"));
    inst.trips.push_back(std::move(t));
  }

  if (top.has("driver_windows")) {
    const json& windows = top.array("driver_windows");
    for (std::size_t i = 0; i < windows.size(); ++i) {
      Reader r(windows[i], pointer("/driver_windows", i));
      r.allow_only({"depot", "at", "min_drivers", "max_drivers", "license"});
      inst.driver_windows.push_back(DriverWindow{r.string("depot"), r.integer("at"), r.integer_or("min_drivers", 0),
                                                 r.integer("max_drivers"), r.optional_string("license")});
    }
  }

  if (top.has("licenses")) {
    const json& licenses = top.array("licenses");
    for (std::size_t i = 0; i < licenses.size(); ++i) {
      Reader r(licenses[i], pointer("/licenses", i));
      r.allow_only({"id", "emu_types", "lines"});
      inst.licenses.push_back(License{r.string("id"), r.strings_or_empty("emu_types"), r.strings_or_empty("lines")});
    }
  }

  validate(inst);
  return inst;
}

/// Reads a UTF-8 JSON instance document.
inline Instance load_instance(std::istream& source) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::parse_error& e) {
    throw InstanceError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_instance(root);
}

inline Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  return load_instance(in);
}

/// Canonical JSON form; load_instance(serialize_instance(x)) == x.
inline json serialize_instance(const Instance& inst) {
  using detail::rational_json;
  json root = json::object();
  root["meta"] = inst.meta;
  root["alpha"] = rational_json(inst.alpha);
  root["delta_min"] = inst.delta_min;
  root["delta_max"] = inst.delta_max;
  root["tolerances"] = {{"seat_single", inst.seat_tolerance.single},
                        {"seat_coupled", inst.seat_tolerance.coupled},
                        {"bike_single", inst.bike_tolerance.single},
                        {"bike_coupled", inst.bike_tolerance.coupled}};
  root["driver_weighting"] = to_string(inst.driver_weighting);
  if (!inst.stations.empty()) root["stations"] = inst.stations;

  json types = json::array();
  for (const auto& ty : inst.emu_types)
    types.push_back({{"id", ty.id}, {"seats", ty.seats}, {"bike_slots", ty.bike_slots},
                     {"cost_per_km", rational_json(ty.cost_per_km)}, {"couplable", ty.couplable}});
  root["emu_types"] = std::move(types);

  json depots = json::array();
  for (const auto& d : inst.depots)
    depots.push_back({{"id", d.id}, {"station", d.station}, {"out_min", d.out_min}, {"out_max", d.out_max},
                      {"in_min", d.in_min}, {"in_max", d.in_max}});
  root["depots"] = std::move(depots);

  json trips = json::array();
  for (const auto& t : inst.trips) {
    json j = {{"id", t.id},
              {"origin", t.origin},
              {"destination", t.destination},
              {"depart", t.depart},
              {"arrive", t.arrive},
              {"passengers", t.passengers},
              {"bicycles", t.bicycles},
              {"couplable", t.couplable},
              {"allowed_types", t.allowed_types},
              {"distance", rational_json(t.distance)},
              {"obligatory", t.obligatory}};
    if (t.driver_depot) j["driver_depot"] = *t.driver_depot;
    if (t.line) j["line"] = *t.line;
    if (t.seat_tolerance) j["seat_tolerance"] = {{"single", t.seat_tolerance->single}, {"coupled", t.seat_tolerance->coupled}};
    if (t.bike_tolerance) j["bike_tolerance"] = {{"single", t.bike_tolerance->single}, {"coupled", t.bike_tolerance->coupled}};
    trips.push_back(std::move(j));
  }
  root["trips"] = std::move(trips);

  json windows = json::array();
  for (const auto& w : inst.driver_windows) {
    json j = {{"depot", w.depot}, {"at", w.at}, {"min_drivers", w.min_drivers}, {"max_drivers", w.max_drivers}};
    if (w.license) j["license"] = *w.license;
    windows.push_back(std::move(j));
  }
  root["driver_windows"] = std::move(windows);

  json licenses = json::array();
  for (const auto& l : inst.licenses)
    licenses.push_back({{"id", l.id}, {"emu_types", l.emu_types}, {"lines", l.lines}});
  root["licenses"] = std::move(licenses);
  return root;
}

}  // namespace rollstock
