#pragma once

// Synthetic instance generator: independent line corridors, each with a
// depot at its home station and back-and-forth trips to a terminal. Trips
// are laid out along planned depot-closed rotations, so every generated
// instance has at least one feasible circulation.

#include "rollstock/model.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rollstock {

struct GeneratorConfig {
  int num_trips = 30;
  int num_couplable = 0;
  int num_depots = 1;
  int num_types = 1;
  Minute delta_min = 5;
  Minute delta_max = 60;
  int min_passengers = 40;
  int trip_minutes_min = 20;
  int trip_minutes_max = 50;
  int rotation_length = 6;  // planned trips per EMU (even)
  int first_departure = 300;
  Rational alpha = Rational(1, 100);
};

namespace detail {

class GeneratorRng {
 public:
  explicit GeneratorRng(std::uint64_t seed) : engine_(seed) {}
  // Inclusive range; modulo reduction keeps output identical across
  // standard library implementations.
  int uniform(int lo, int hi) {
    if (hi <= lo) return lo;
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Deterministic for a fixed (config, seed). Throws std::invalid_argument on
/// impossible parameter combinations.
inline Instance generate_synthetic(const GeneratorConfig& cfg, std::uint64_t seed) {
  if (cfg.num_trips < 1) throw std::invalid_argument("generator: num_trips must be at least 1");
  if (cfg.num_couplable < 0 || cfg.num_couplable > cfg.num_trips)
    throw std::invalid_argument("generator: num_couplable must lie in [0, num_trips]");
  if (cfg.num_depots < 1) throw std::invalid_argument("generator: num_depots must be at least 1");
  if (cfg.num_depots > cfg.num_trips) throw std::invalid_argument("generator: more depots than trips");
  if (cfg.num_types < 1) throw std::invalid_argument("generator: num_types must be at least 1");
  if (cfg.delta_min < 0 || cfg.delta_min > cfg.delta_max)
    throw std::invalid_argument("generator: need 0 <= delta_min <= delta_max");
  if (cfg.trip_minutes_min < 1 || cfg.trip_minutes_min > cfg.trip_minutes_max)
    throw std::invalid_argument("generator: bad trip duration range");
  if (cfg.rotation_length < 2 || cfg.rotation_length % 2 != 0)
    throw std::invalid_argument("generator: rotation_length must be even and at least 2");

  detail::GeneratorRng rng(seed);
  Instance inst;
  inst.meta = {{"name", "synthetic"},
               {"generator",
                {{"seed", seed},
                 {"trips", cfg.num_trips},
                 {"couplable", cfg.num_couplable},
                 {"depots", cfg.num_depots},
                 {"types", cfg.num_types}}}};
  inst.alpha = cfg.alpha;
  inst.delta_min = cfg.delta_min;
  inst.delta_max = cfg.delta_max;
  inst.seat_tolerance = {10, 20};
  inst.bike_tolerance = {2, 4};

  for (int r = 0; r < cfg.num_types; ++r) {
    inst.emu_types.push_back(EmuType{"R" + std::to_string(r), 120 + 40 * r, 6 + 2 * r, Rational(2 + r, 2), true});
  }

  const int gap_max = std::min(cfg.delta_max, cfg.delta_min + 25);
  const int cycle_max = cfg.trip_minutes_max + gap_max;

  struct Planned {
    Trip trip;
    int type = 0;
  };
  std::vector<Planned> planned;
  std::vector<std::vector<int>> rotations_per_type(static_cast<std::size_t>(cfg.num_depots),
                                                   std::vector<int>(static_cast<std::size_t>(cfg.num_types), 0));

  for (int c = 0; c < cfg.num_depots; ++c) {
    std::string home = "H" + std::to_string(c);
    std::string terminal = "E" + std::to_string(c);
    inst.stations.push_back(home);
    inst.stations.push_back(terminal);
    std::string depot_id = "D" + std::to_string(c);
    std::string line = "L" + std::to_string(c);

    int trips_here = cfg.num_trips / cfg.num_depots + (c < cfg.num_trips % cfg.num_depots ? 1 : 0);
    int paired = trips_here - trips_here % 2;
    int rotations = (paired + cfg.rotation_length - 1) / cfg.rotation_length;
    int longest = std::min(paired, cfg.rotation_length);
    int budget = 1440 - cfg.first_departure - longest * cycle_max - cycle_max;
    int stagger = rotations > 0 ? std::min(40, budget / std::max(1, rotations)) : 0;
    if (rotations > 0 && stagger < 1)
      throw std::invalid_argument("generator: too many trips per corridor to fit in one day");

    int made = 0;
    Minute latest_arrival = cfg.first_departure;
    int counter = 0;
    auto make_trip = [&](bool outbound, Minute depart, int type) {
      Trip t;
      t.id = "c" + std::to_string(c) + "_t" + std::to_string(counter++);
      t.origin = outbound ? home : terminal;
      t.destination = outbound ? terminal : home;
      t.depart = depart;
      t.arrive = depart + rng.uniform(cfg.trip_minutes_min, cfg.trip_minutes_max);
      const EmuType& ty = inst.emu_types[static_cast<std::size_t>(type)];
      t.passengers = rng.uniform(std::min(cfg.min_passengers, ty.seats), ty.seats);
      t.bicycles = rng.uniform(0, ty.bike_slots);
      t.distance = rng.uniform(10, 60);
      t.driver_depot = depot_id;
      t.line = line;
      for (int r = 0; r < cfg.num_types; ++r)
        if (r == type || rng.coin()) t.allowed_types.push_back(inst.emu_types[static_cast<std::size_t>(r)].id);
      latest_arrival = std::max(latest_arrival, t.arrive);
      planned.push_back(Planned{t, type});
      return t.arrive;
    };

    for (int k = 0; k < rotations; ++k) {
      int type = (k + c) % cfg.num_types;
      int length = std::min(cfg.rotation_length, paired - made);
      Minute clock = cfg.first_departure + k * stagger + rng.uniform(0, std::max(0, stagger / 4));
      for (int j = 0; j < length; ++j) {
        clock = make_trip(j % 2 == 0, clock, type);
        if (j + 1 < length) clock += rng.uniform(cfg.delta_min, gap_max);
      }
      made += length;
      ++rotations_per_type[static_cast<std::size_t>(c)][static_cast<std::size_t>(type)];
    }
    if (trips_here % 2 == 1) {
      // Evening single trip, departing after every other trip in the
      // corridor so nothing can follow it at the terminal.
      int type = c % cfg.num_types;
      Minute depart = latest_arrival + 1;
      if (depart + cfg.trip_minutes_max >= 1440)
        throw std::invalid_argument("generator: too many trips per corridor to fit in one day");
      make_trip(true, depart, type);
      ++rotations_per_type[static_cast<std::size_t>(c)][static_cast<std::size_t>(type)];
    }

    Depot depot;
    depot.id = depot_id;
    depot.station = home;
    for (int r = 0; r < cfg.num_types; ++r) {
      const std::string& tid = inst.emu_types[static_cast<std::size_t>(r)].id;
      int fleet = rotations_per_type[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] + 1;
      depot.out_min[tid] = 0;
      depot.out_max[tid] = fleet;
      depot.in_min[tid] = 0;
      depot.in_max[tid] = fleet;
    }
    inst.depots.push_back(std::move(depot));
  }

  std::stable_sort(planned.begin(), planned.end(), [](const Planned& a, const Planned& b) {
    return a.trip.depart != b.trip.depart ? a.trip.depart < b.trip.depart : a.trip.id < b.trip.id;
  });
  for (auto& p : planned) inst.trips.push_back(p.trip);

  std::vector<std::size_t> order(inst.trips.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(i) - 1))]);
  for (int i = 0; i < cfg.num_couplable; ++i) inst.trips[order[static_cast<std::size_t>(i)]].couplable = true;

  for (int c = 0; c < cfg.num_depots; ++c) {
    std::string depot_id = "D" + std::to_string(c);
    for (Minute at : {480, 1020}) {
      int running = 0;
      for (const auto& t : inst.trips)
        if (t.driver_depot == depot_id && t.running_at(at)) ++running;
      inst.driver_windows.push_back(DriverWindow{depot_id, at, 0, 2 * running, std::nullopt});
    }
  }

  validate(inst);
  return inst;
}

}  // namespace rollstock
