#pragma once

// Trip hypergraph: one node per trip plus a source and a sink per depot;
// simple arcs move one EMU between consecutive trips, hyper-arcs couple two
// EMUs onto a trip, move a coupled pair, or split it onto two trips.

#include "rollstock/model.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace rollstock {

using NodeId = std::size_t;
using ArcId = std::size_t;
using TypeId = std::size_t;

enum class NodeKind { trip, service_trip, depot_source, depot_sink };

struct Node {
  std::string id;
  NodeKind kind = NodeKind::trip;
  std::optional<std::size_t> trip;
  std::optional<std::size_t> depot;

  bool is_trip() const { return kind == NodeKind::trip || kind == NodeKind::service_trip; }
};

enum class ArcKind { depot_out, transfer, couple, coupled_transfer, decouple, depot_in };

inline const char* to_string(ArcKind kind) {
  switch (kind) {
    case ArcKind::depot_out: return "depot_out";
    case ArcKind::transfer: return "transfer";
    case ArcKind::couple: return "couple";
    case ArcKind::coupled_transfer: return "coupled_transfer";
    case ArcKind::decouple: return "decouple";
    case ArcKind::depot_in: return "depot_in";
  }
  return "?";
}

struct HyperArc {
  ArcId id = 0;
  ArcKind kind = ArcKind::transfer;
  std::vector<NodeId> sources;  // 1 or 2
  std::vector<NodeId> targets;  // 1 or 2
  TypeId emu_type = 0;
  int k = 1;        // EMUs on each target trip
  int k_prime = 1;  // EMUs on each source trip
  Rational cost = 0;
  int seat_shortage = 0;  // worst target
  int bike_shortage = 0;
  bool exceeds_seat_tolerance = false;  // checked per target
  bool exceeds_bike_tolerance = false;

  bool is_hyper() const { return k != 1 || k_prime != 1 || sources.size() != 1 || targets.size() != 1; }
};

struct SizeBounds {
  std::size_t single_trips = 0;     // |T'|
  std::size_t couplable_trips = 0;  // |T''|
  std::size_t types = 0;            // |R|
  std::size_t variable_bound = 0;   // |T'|^2 |R| + |T''|^3 |R|
  std::size_t per_trip_bound = 0;   // |T|^2 |R|, bound on |H(tau)|
  std::size_t actual_arcs = 0;
  std::size_t depot_arcs = 0;
  std::size_t max_cover = 0;        // max_tau |H(tau)|
};

class Hypergraph {
 public:
  using TypedKey = std::pair<NodeId, TypeId>;
  using CheckpointKey = std::pair<Minute, std::size_t>;  // (minute, depot)

  std::vector<Node> nodes;
  std::vector<HyperArc> arcs;
  std::vector<std::vector<ArcId>> idx_cover;  // per trip index, H(tau)
  std::map<TypedKey, std::vector<ArcId>> idx_in;
  std::map<TypedKey, std::vector<ArcId>> idx_out;
  std::map<std::pair<std::size_t, TypeId>, std::vector<ArcId>> idx_depot_out;
  std::map<std::pair<std::size_t, TypeId>, std::vector<ArcId>> idx_depot_in;
  std::map<CheckpointKey, std::vector<ArcId>> idx_driver;  // H(t, d)
  std::vector<bool> terminal;  // per trip: day-end node, no continuity rows
  std::size_t trip_count = 0;  // trip nodes occupy ids [0, trip_count)

  NodeId trip_node(std::size_t trip) const { return trip; }
  NodeId depot_source(std::size_t depot) const { return trip_count + 2 * depot; }
  NodeId depot_sink(std::size_t depot) const { return trip_count + 2 * depot + 1; }
  std::size_t num_trips() const { return trip_count; }

  const std::vector<ArcId>& in(NodeId node, TypeId type) const { return find(idx_in, {node, type}); }
  const std::vector<ArcId>& out(NodeId node, TypeId type) const { return find(idx_out, {node, type}); }

  std::size_t num_depot_arcs() const {
    return static_cast<std::size_t>(std::count_if(arcs.begin(), arcs.end(), [](const HyperArc& a) {
      return a.kind == ArcKind::depot_out || a.kind == ArcKind::depot_in;
    }));
  }

  /// Human-readable arc label, e.g. "transfer(tau1->tau3,r1)".
  std::string describe(const HyperArc& arc, const Instance& inst) const {
    std::ostringstream os;
    os << to_string(arc.kind) << "(";
    auto list = [&](const std::vector<NodeId>& ids) {
      for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? "+" : "") << nodes[ids[i]].id;
    };
    list(arc.sources);
    os << "->";
    list(arc.targets);
    os << "," << inst.emu_types[arc.emu_type].id;
    if (arc.k == 2 || arc.k_prime == 2) os << ",x2";
    os << ")";
    return os.str();
  }

 private:
  template <typename Map>
  static const std::vector<ArcId>& find(const Map& map, const typename Map::key_type& key) {
    static const std::vector<ArcId> empty;
    auto it = map.find(key);
    return it == map.end() ? empty : it->second;
  }
};

namespace detail {

inline bool can_follow(const Instance& inst, const Trip& from, const Trip& to) {
  if (from.destination != to.origin) return false;
  Minute turnaround = to.depart - from.arrive;
  return inst.delta_min <= turnaround && turnaround <= inst.delta_max;
}

}  // namespace detail

/// Driver-checkpoint coefficient of `arc` for a window (time, depot,
/// optional license): number of target trips running at `at` that are
/// crewed from `depot` (and need `license`), times k under per-EMU weighting.
inline int driver_coefficient(const Instance& inst, const Hypergraph& g, const HyperArc& arc, Minute at,
                              std::size_t depot, const std::optional<std::string>& license) {
  int trains = 0;
  for (NodeId target : arc.targets) {
    const Node& node = g.nodes[target];
    if (!node.trip) continue;
    const Trip& trip = inst.trips[*node.trip];
    if (!trip.running_at(at) || !trip.driver_depot) continue;
    if (*inst.depot_index(*trip.driver_depot) != depot) continue;
    if (license) {
      const std::string& type_id = inst.emu_types[arc.emu_type].id;
      auto required = std::find_if(inst.licenses.begin(), inst.licenses.end(),
                                   [&](const License& l) { return l.matches(type_id, trip.line); });
      if (required == inst.licenses.end() || required->id != *license) continue;
    }
    ++trains;
  }
  return inst.driver_weighting == DriverWeighting::per_emu ? trains * arc.k : trains;
}

/// Enumerates every admissible arc and hyper-arc of a validated instance.
inline Hypergraph build_hypergraph(const Instance& inst) {
  Hypergraph g;
  const std::size_t num_trips = inst.trips.size();
  g.trip_count = num_trips;

  for (std::size_t i = 0; i < num_trips; ++i) {
    const Trip& t = inst.trips[i];
    g.nodes.push_back(Node{t.id, t.obligatory ? NodeKind::trip : NodeKind::service_trip, i, std::nullopt});
  }
  for (std::size_t d = 0; d < inst.depots.size(); ++d) {
    g.nodes.push_back(Node{"depot:" + inst.depots[d].id + ":out", NodeKind::depot_source, std::nullopt, d});
    g.nodes.push_back(Node{"depot:" + inst.depots[d].id + ":in", NodeKind::depot_sink, std::nullopt, d});
  }

  std::vector<HyperArc> arcs;

  auto shortage = [](int demand, int capacity) { return std::max(0, demand - capacity); };
  auto make_arc = [&](ArcKind kind, std::vector<NodeId> sources, std::vector<NodeId> targets, TypeId r, int k,
                      int k_prime) {
    const EmuType& ty = inst.emu_types[r];
    HyperArc a;
    a.kind = kind;
    a.sources = std::move(sources);
    a.targets = std::move(targets);
    a.emu_type = r;
    a.k = k;
    a.k_prime = k_prime;
    for (NodeId target : a.targets) {
      const Node& node = g.nodes[target];
      if (!node.trip) continue;
      const Trip& trip = inst.trips[*node.trip];
      a.cost += ty.cost_per_km * trip.distance * k;
      int seats = shortage(trip.passengers, k * ty.seats);
      int bikes = shortage(trip.bicycles, k * ty.bike_slots);
      a.seat_shortage = std::max(a.seat_shortage, seats);
      a.bike_shortage = std::max(a.bike_shortage, bikes);
      a.exceeds_seat_tolerance |= seats > inst.seat_tolerance_for(trip).for_units(k);
      a.exceeds_bike_tolerance |= bikes > inst.bike_tolerance_for(trip).for_units(k);
    }
    arcs.push_back(std::move(a));
  };

  for (TypeId r = 0; r < inst.emu_types.size(); ++r) {
    const EmuType& ty = inst.emu_types[r];
    for (std::size_t ti = 0; ti < num_trips; ++ti) {
      const Trip& target = inst.trips[ti];
      if (!target.admits(ty.id)) continue;
      const bool coupled_target = target.couplable && ty.couplable;

      for (std::size_t d = 0; d < inst.depots.size(); ++d) {
        const Depot& depot = inst.depots[d];
        if (depot.station != target.origin) continue;
        int available = Depot::lookup(depot.out_max, ty.id);
        if (available >= 1) make_arc(ArcKind::depot_out, {g.depot_source(d)}, {ti}, r, 1, 1);
        if (coupled_target && available >= 2) make_arc(ArcKind::depot_out, {g.depot_source(d)}, {ti}, r, 2, 2);
      }

      std::vector<std::size_t> predecessors;
      for (std::size_t si = 0; si < num_trips; ++si) {
        if (si == ti) continue;
        const Trip& source = inst.trips[si];
        if (source.admits(ty.id) && detail::can_follow(inst, source, target)) predecessors.push_back(si);
      }
      for (std::size_t si : predecessors) {
        make_arc(ArcKind::transfer, {si}, {ti}, r, 1, 1);
        if (coupled_target && inst.trips[si].couplable) make_arc(ArcKind::coupled_transfer, {si}, {ti}, r, 2, 2);
      }
      if (coupled_target) {
        for (std::size_t a = 0; a < predecessors.size(); ++a)
          for (std::size_t b = a + 1; b < predecessors.size(); ++b)
            make_arc(ArcKind::couple, {predecessors[a], predecessors[b]}, {ti}, r, 2, 1);
      }
    }

    // Decoupling and depot returns originate from a trip.
    for (std::size_t si = 0; si < num_trips; ++si) {
      const Trip& source = inst.trips[si];
      if (!source.admits(ty.id)) continue;
      const bool coupled_source = source.couplable && ty.couplable;
      if (coupled_source) {
        std::vector<std::size_t> successors;
        for (std::size_t ti = 0; ti < num_trips; ++ti)
          if (ti != si && inst.trips[ti].admits(ty.id) && detail::can_follow(inst, source, inst.trips[ti]))
            successors.push_back(ti);
        for (std::size_t a = 0; a < successors.size(); ++a)
          for (std::size_t b = a + 1; b < successors.size(); ++b)
            make_arc(ArcKind::decouple, {si}, {successors[a], successors[b]}, r, 1, 2);
      }
      for (std::size_t d = 0; d < inst.depots.size(); ++d) {
        const Depot& depot = inst.depots[d];
        if (depot.station != source.destination) continue;
        int capacity = Depot::lookup(depot.in_max, ty.id);
        if (capacity >= 1) make_arc(ArcKind::depot_in, {si}, {g.depot_sink(d)}, r, 1, 1);
        if (coupled_source && capacity >= 2) make_arc(ArcKind::depot_in, {si}, {g.depot_sink(d)}, r, 2, 2);
      }
    }
  }

  // Deterministic ids: simple arcs first, then hyper-arcs; within each group
  // lexicographic on (sources, targets, type, kind, k). Depot sources rank
  // before trips, depot sinks after.
  auto rank = [&](NodeId n) -> std::pair<int, std::size_t> {
    switch (g.nodes[n].kind) {
      case NodeKind::depot_source: return {0, n};
      case NodeKind::depot_sink: return {2, n};
      default: return {1, n};
    }
  };
  auto key = [&](const HyperArc& a) {
    std::vector<std::pair<int, std::size_t>> src, dst;
    for (NodeId n : a.sources) src.push_back(rank(n));
    for (NodeId n : a.targets) dst.push_back(rank(n));
    return std::make_tuple(a.is_hyper(), src, dst, a.emu_type, static_cast<int>(a.kind), a.k);
  };
  std::stable_sort(arcs.begin(), arcs.end(), [&](const HyperArc& x, const HyperArc& y) { return key(x) < key(y); });
  for (std::size_t i = 0; i < arcs.size(); ++i) arcs[i].id = i;
  g.arcs = std::move(arcs);

  g.idx_cover.assign(num_trips, {});
  for (const HyperArc& a : g.arcs) {
    for (NodeId t : a.targets) {
      if (g.nodes[t].trip) g.idx_cover[*g.nodes[t].trip].push_back(a.id);
      g.idx_in[{t, a.emu_type}].push_back(a.id);
    }
    for (NodeId s : a.sources) g.idx_out[{s, a.emu_type}].push_back(a.id);
    if (a.kind == ArcKind::depot_out) g.idx_depot_out[{*g.nodes[a.sources[0]].depot, a.emu_type}].push_back(a.id);
    if (a.kind == ArcKind::depot_in) g.idx_depot_in[{*g.nodes[a.targets[0]].depot, a.emu_type}].push_back(a.id);
  }

  for (const DriverWindow& w : inst.driver_windows) {
    std::size_t d = *inst.depot_index(w.depot);
    Hypergraph::CheckpointKey ck{w.at, d};
    if (g.idx_driver.count(ck)) continue;
    auto& list = g.idx_driver[ck];
    for (const HyperArc& a : g.arcs)
      if (driver_coefficient(inst, g, a, w.at, d, std::nullopt) > 0) list.push_back(a.id);
  }

  // A trip is a day-end terminal when no depot takes its EMU back and no
  // later trip (of any type, ignoring the Delta cap) leaves its arrival
  // station; only non-terminal trips carry continuity rows.
  g.terminal.assign(num_trips, true);
  for (std::size_t si = 0; si < num_trips; ++si) {
    const Trip& source = inst.trips[si];
    for (const HyperArc& a : g.arcs)
      if (a.kind == ArcKind::depot_in && a.sources[0] == si) g.terminal[si] = false;
    for (std::size_t ti = 0; ti < num_trips && g.terminal[si]; ++ti) {
      const Trip& t = inst.trips[ti];
      if (ti != si && t.origin == source.destination && t.depart >= source.arrive + inst.delta_min)
        g.terminal[si] = false;
    }
  }
  return g;
}

/// Worst-case arc-count bounds next to the actual hypergraph size.
inline SizeBounds size_bounds(const Instance& inst, const Hypergraph& g) {
  SizeBounds b;
  b.couplable_trips = inst.num_couplable_trips();
  b.single_trips = inst.trips.size() - b.couplable_trips;
  b.types = inst.emu_types.size();
  b.variable_bound = b.single_trips * b.single_trips * b.types +
                     b.couplable_trips * b.couplable_trips * b.couplable_trips * b.types;
  b.per_trip_bound = inst.trips.size() * inst.trips.size() * b.types;
  b.actual_arcs = g.arcs.size();
  b.depot_arcs = g.num_depot_arcs();
  for (const auto& cover : g.idx_cover) b.max_cover = std::max(b.max_cover, cover.size());
  return b;
}

inline SizeBounds size_bounds(const Instance& inst) { return size_bounds(inst, build_hypergraph(inst)); }

/// Graphviz rendering; hyper-arcs become small junction points.
inline std::string to_dot(const Hypergraph& g, const Instance& inst) {
  std::ostringstream os;
  os << "digraph rollstock {\n  rankdir=LR;\n";
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    const Node& node = g.nodes[n];
    const char* shape = node.is_trip() ? "circle" : "box";
    const char* style = node.kind == NodeKind::service_trip ? ",style=dashed" : "";
    os << "  n" << n << " [label=\"" << node.id << "\",shape=" << shape << style << "];\n";
  }
  for (const HyperArc& a : g.arcs) {
    std::string label = "x" + std::to_string(a.id) + " " + inst.emu_types[a.emu_type].id;
    if (!a.is_hyper()) {
      os << "  n" << a.sources[0] << " -> n" << a.targets[0] << " [label=\"" << label << "\"];\n";
      continue;
    }
    os << "  h" << a.id << " [shape=point,xlabel=\"" << label << " " << to_string(a.kind) << "\"];\n";
    for (NodeId s : a.sources) os << "  n" << s << " -> h" << a.id << " [arrowhead=none,color=darkgreen];\n";
    for (NodeId t : a.targets) os << "  h" << a.id << " -> n" << t << " [color=darkgreen];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace rollstock
