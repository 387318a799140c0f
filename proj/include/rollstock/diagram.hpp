#pragma once

// Per-EMU rotations of a solution and static time-distance diagrams (SVG and
// ASCII). Coupled legs are drawn doubled in green.

#include "rollstock/netbuild.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rollstock {

struct Rotation {
  TypeId emu_type = 0;
  std::optional<std::size_t> start_depot;  // empty when the unit appears mid-day
  std::optional<std::size_t> end_depot;
  std::vector<std::size_t> trips;  // trip indices in running order
};

struct RotationPlan {
  std::vector<Rotation> rotations;
  std::vector<int> units_on_trip;  // per trip index
  bool coupled(std::size_t trip) const { return units_on_trip[trip] >= 2; }
};

/// Follows individual EMUs through the selected arcs. Each arc into a trip
/// carries k / |sources| units from every source; depot-out arcs create units.
inline RotationPlan trace_rotations(const Hypergraph& g, const Instance& inst, const std::vector<ArcId>& selected) {
  RotationPlan plan;
  const std::size_t n = inst.trips.size();
  plan.units_on_trip.assign(n, 0);
  std::vector<std::vector<ArcId>> into(n);
  std::vector<std::vector<ArcId>> returns(n);
  for (ArcId a : selected) {
    const HyperArc& arc = g.arcs.at(a);
    if (arc.kind == ArcKind::depot_in) {
      returns[*g.nodes[arc.sources[0]].trip].push_back(a);
      continue;
    }
    for (NodeId t : arc.targets) into[*g.nodes[t].trip].push_back(a);
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inst.trips[a].depart < inst.trips[b].depart;
  });

  std::map<std::pair<std::size_t, TypeId>, std::deque<std::size_t>> outbox;  // units leaving a trip
  auto take = [&](std::size_t trip, TypeId r) -> std::size_t {
    auto& box = outbox[{trip, r}];
    if (!box.empty()) {
      std::size_t u = box.front();
      box.pop_front();
      return u;
    }
    plan.rotations.push_back(Rotation{r, std::nullopt, std::nullopt, {trip}});
    return plan.rotations.size() - 1;
  };

  for (std::size_t t : order) {
    std::vector<std::size_t> units;
    for (ArcId a : into[t]) {
      const HyperArc& arc = g.arcs[a];
      if (arc.kind == ArcKind::depot_out) {
        for (int i = 0; i < arc.k; ++i) {
          plan.rotations.push_back(Rotation{arc.emu_type, *g.nodes[arc.sources[0]].depot, std::nullopt, {}});
          units.push_back(plan.rotations.size() - 1);
        }
        continue;
      }
      int per_source = arc.k / static_cast<int>(arc.sources.size());
      for (NodeId s : arc.sources)
        for (int i = 0; i < per_source; ++i) units.push_back(take(*g.nodes[s].trip, arc.emu_type));
    }
    for (std::size_t u : units) {
      plan.rotations[u].trips.push_back(t);
      outbox[{t, plan.rotations[u].emu_type}].push_back(u);
    }
    plan.units_on_trip[t] = static_cast<int>(units.size());
    for (ArcId a : returns[t]) {
      const HyperArc& arc = g.arcs[a];
      for (int i = 0; i < arc.k; ++i) {
        std::size_t u = take(t, arc.emu_type);
        plan.rotations[u].end_depot = *g.nodes[arc.targets[0]].depot;
      }
    }
  }
  // Units created by take() for a missing predecessor already list the trip.
  for (Rotation& r : plan.rotations)
    r.trips.erase(std::unique(r.trips.begin(), r.trips.end()), r.trips.end());
  return plan;
}

namespace detail {

inline std::string clock_label(Minute m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", m / 60, m % 60);
  return buf;
}

inline std::pair<Minute, Minute> time_range(const Instance& inst) {
  if (inst.trips.empty()) return {0, 60};
  Minute lo = inst.trips[0].depart, hi = inst.trips[0].arrive;
  for (const Trip& t : inst.trips) {
    lo = std::min(lo, t.depart);
    hi = std::max(hi, t.arrive);
  }
  lo = lo / 60 * 60;
  hi = (hi + 59) / 60 * 60;
  if (hi <= lo) hi = lo + 60;
  return {lo, hi};
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#9467bd", "#8c564b", "#e377c2",
                                 "#7f7f7f", "#bcbd22", "#17becf", "#ff7f0e", "#393b79"};
  return colors[i % (sizeof colors / sizeof colors[0])];
}

}  // namespace detail

/// Time on x, stations on y, one polyline per rotation.
inline std::string render_svg(const Instance& inst, const RotationPlan& plan) {
  const auto stations = inst.station_order();
  const auto [t0, t1] = detail::time_range(inst);
  const double left = 80, top = 30, width = 720, row = 60;
  const double height = top * 2 + row * static_cast<double>(std::max<std::size_t>(stations.size(), 1));
  auto x_of = [&](Minute m) { return left + width * (m - t0) / static_cast<double>(t1 - t0); };
  auto y_of = [&](const std::string& s) {
    auto it = std::find(stations.begin(), stations.end(), s);
    return top + row * (static_cast<double>(it - stations.begin()) + 0.5);
  };
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + width + 40 << "\" height=\"" << height
     << "\" font-family=\"monospace\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& s : stations) {
    os << "<line x1=\"" << left << "\" y1=\"" << y_of(s) << "\" x2=\"" << left + width << "\" y2=\"" << y_of(s)
       << "\" stroke=\"#ccc\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << y_of(s) + 4 << "\" text-anchor=\"end\">" << s << "</text>\n";
  }
  for (Minute m = t0; m <= t1; m += 60) {
    os << "<line x1=\"" << x_of(m) << "\" y1=\"" << top << "\" x2=\"" << x_of(m) << "\" y2=\"" << height - top
       << "\" stroke=\"#eee\"/>\n";
    os << "<text x=\"" << x_of(m) << "\" y=\"" << height - top + 16 << "\" text-anchor=\"middle\">"
       << detail::clock_label(m) << "</text>\n";
  }
  // Coupled legs underneath, once per trip.
  for (std::size_t t = 0; t < inst.trips.size(); ++t) {
    if (!plan.coupled(t)) continue;
    const Trip& trip = inst.trips[t];
    os << "<line class=\"coupled\" x1=\"" << x_of(trip.depart) << "\" y1=\"" << y_of(trip.origin) << "\" x2=\""
       << x_of(trip.arrive) << "\" y2=\"" << y_of(trip.destination)
       << "\" stroke=\"#2ca02c\" stroke-width=\"7\" stroke-linecap=\"round\"/>\n";
  }
  for (std::size_t i = 0; i < plan.rotations.size(); ++i) {
    const Rotation& r = plan.rotations[i];
    os << "<g class=\"rotation\" id=\"rot" << i << "\" stroke=\"" << detail::palette(i) << "\" fill=\"none\">\n";
    os << "<polyline stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < r.trips.size(); ++k) {
      const Trip& trip = inst.trips[r.trips[k]];
      os << (k ? " " : "") << x_of(trip.depart) << "," << y_of(trip.origin) << " " << x_of(trip.arrive) << ","
         << y_of(trip.destination);
    }
    os << "\"/>\n";
    for (std::size_t t : r.trips) {
      const Trip& trip = inst.trips[t];
      if (trip.obligatory) continue;
      os << "<line stroke-dasharray=\"4 3\" stroke=\"white\" x1=\"" << x_of(trip.depart) << "\" y1=\""
         << y_of(trip.origin) << "\" x2=\"" << x_of(trip.arrive) << "\" y2=\"" << y_of(trip.destination) << "\"/>\n";
    }
    os << "</g>\n";
  }
  for (std::size_t t = 0; t < inst.trips.size(); ++t) {
    if (plan.units_on_trip[t] == 0) continue;
    const Trip& trip = inst.trips[t];
    double mx = (x_of(trip.depart) + x_of(trip.arrive)) / 2, my = (y_of(trip.origin) + y_of(trip.destination)) / 2;
    os << "<text x=\"" << mx + 4 << "\" y=\"" << my - 4 << "\">" << trip.id << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Gantt-style text chart, one row per rotation ('=' coupled leg, '-' single
/// leg, ':' service leg, '.' dwell), followed by the rotation listing.
inline std::string render_ascii(const Instance& inst, const RotationPlan& plan, Minute step = 10) {
  const auto [t0, t1] = detail::time_range(inst);
  const std::size_t cols = static_cast<std::size_t>((t1 - t0) / step);
  auto col = [&](Minute m) { return static_cast<std::size_t>((m - t0) / step); };
  std::ostringstream os;
  std::string axis(cols + 6, ' ');
  for (Minute m = t0; m <= t1; m += 60) {
    std::string label = detail::clock_label(m);
    std::size_t c = col(m);
    for (std::size_t i = 0; i < label.size() && c + i < axis.size(); ++i) axis[c + i] = label[i];
  }
  axis.erase(axis.find_last_not_of(' ') + 1);
  os << "          " << axis << "\n";
  for (std::size_t i = 0; i < plan.rotations.size(); ++i) {
    const Rotation& r = plan.rotations[i];
    std::string line(cols + 1, ' ');
    for (std::size_t k = 0; k < r.trips.size(); ++k) {
      const Trip& trip = inst.trips[r.trips[k]];
      char mark = plan.coupled(r.trips[k]) ? '=' : (trip.obligatory ? '-' : ':');
      for (std::size_t c = col(trip.depart); c < col(trip.arrive) && c < line.size(); ++c) line[c] = mark;
      if (k + 1 < r.trips.size()) {
        const Trip& next = inst.trips[r.trips[k + 1]];
        for (std::size_t c = col(trip.arrive); c < col(next.depart) && c < line.size(); ++c) line[c] = '.';
      }
    }
    char head[16];
    std::snprintf(head, sizeof head, "R%-3zu %-4s ", i + 1, inst.emu_types[r.emu_type].id.c_str());
    line.erase(line.find_last_not_of(' ') + 1);
    os << head << line << "\n";
  }
  os << "\n";
  for (std::size_t i = 0; i < plan.rotations.size(); ++i) {
    const Rotation& r = plan.rotations[i];
    os << "R" << i + 1 << " " << inst.emu_types[r.emu_type].id << ": ";
    os << (r.start_depot ? "[" + inst.depots[*r.start_depot].id + "]" : "[?]");
    for (std::size_t t : r.trips) {
      const Trip& trip = inst.trips[t];
      os << " " << trip.id << (plan.coupled(t) ? "*" : "") << " " << trip.origin << " "
         << detail::clock_label(trip.depart) << "-" << detail::clock_label(trip.arrive) << " " << trip.destination;
    }
    os << (r.end_depot ? " [" + inst.depots[*r.end_depot].id + "]" : "") << "\n";
  }
  if (plan.rotations.empty()) os << "(no rotations)\n";
  return os.str();
}

}  // namespace rollstock
