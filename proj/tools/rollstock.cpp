// rollstock: command-line front end for the circulation toolkit.

#include "rollstock/anneal.hpp"
#include "rollstock/diagram.hpp"
#include "rollstock/exact.hpp"
#include "rollstock/generator.hpp"
#include "rollstock/ilp.hpp"
#include "rollstock/qubo.hpp"
#include "rollstock/solution_io.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace rollstock;

namespace {

enum Exit { kOk = 0, kError = 1, kInfeasible = 2, kTimeLimit = 3 };

struct Overrides {
  std::optional<std::string> alpha;
  std::optional<int> delta_max;
  std::array<std::optional<std::string>, 5> lambdas;
};

struct SamplerFlags {
  std::size_t reads = 100;
  std::size_t sweeps = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double beta_min = 0.01;
  double beta_max = 10;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("rollstock");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ROLLSTOCK_LOG")) {
    auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off")
      spdlog::warn("ROLLSTOCK_LOG={} not recognised; use trace, debug, info, warn, error or off", env);
    else
      spdlog::set_level(level);
  }
}

Instance load(const std::string& path, const Overrides& o) {
  if (!fs::exists(path)) throw std::runtime_error("cannot open instance file: " + path);
  Instance inst = load_instance_file(path);
  if (o.alpha) inst.alpha = parse_rational(*o.alpha);
  if (o.delta_max) inst.delta_max = *o.delta_max;
  validate(inst);
  spdlog::info("loaded {}: {} trips, {} types, {} depots", path, inst.trips.size(), inst.emu_types.size(),
               inst.depots.size());
  return inst;
}

Lambdas lambdas_of(const Overrides& o) {
  Lambdas l = default_lambdas();
  for (std::size_t i = 0; i < 5; ++i)
    if (o.lambdas[i]) l[i] = parse_rational(*o.lambdas[i]);
  return l;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  spdlog::info("wrote {}", path.string());
}

/// Writes to the file when given, stdout otherwise.
void emit(const std::string& out, const std::string& text) {
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string arc_list(const Instance& inst, const Hypergraph& g, const IlpModel& ilp, const Assignment& x) {
  std::string s;
  for (VarIndex i = 0; i < ilp.num_vars; ++i)
    if (x[i]) s += (s.empty() ? "" : ", ") + ("x" + std::to_string(i)) + " " + g.describe(g.arcs[ilp.var_arc[i]], inst);
  return s;
}

int cmd_validate(const std::string& path, const Overrides& o) {
  Instance inst = load(path, o);
  Hypergraph g = build_hypergraph(inst);
  IlpModel ilp = build_ilp(g, inst);
  std::cout << "ok: " << inst.trips.size() << " trips (" << inst.num_couplable_trips() << " couplable), "
            << inst.emu_types.size() << " types, " << inst.depots.size() << " depots, " << ilp.num_vars
            << " variables, " << ilp.constraints.size() << " rows\n";
  return kOk;
}

int cmd_generate(const GeneratorConfig& cfg, std::uint64_t seed, const std::string& out) {
  emit(out, dump(serialize_instance(generate_synthetic(cfg, seed))));
  return kOk;
}

int cmd_solve_ilp(const std::string& path, const Overrides& o, double time_limit, const std::string& out,
                  bool emit_lp, bool emit_dot) {
  auto t0 = std::chrono::steady_clock::now();
  Instance inst = load(path, o);
  Hypergraph g = build_hypergraph(inst);
  IlpModel ilp = build_ilp(g, inst);
  double build_seconds = since(t0);
  ExactResult r = solve_exact(ilp, time_limit);
  spdlog::info("{} nodes, {:.3f} s", r.nodes, r.seconds);

  std::cout << "status: " << to_string(r.status) << "\n";
  if (r.solution) {
    std::cout << "objective: " << to_string(r.solution->objective) << "\n";
    std::cout << "selected: " << arc_list(inst, g, ilp, r.solution->x) << "\n";
  }
  std::cout << "time: " << build_seconds + r.seconds << " s\n";

  if (!out.empty()) {
    json doc = {{"status", to_string(r.status)}, {"optimal", r.optimal}};
    doc["solution"] = r.solution ? solution_json(inst, g, ilp, *r.solution) : json(nullptr);
    write_file(fs::path(out) / "solution.json", dump(doc));
    json timing = {{"build_seconds", build_seconds}, {"solve_seconds", r.seconds}, {"nodes", r.nodes}};
    write_file(fs::path(out) / "timing.json", dump(timing));
    if (emit_lp) write_file(fs::path(out) / "model.lp", export_lp(ilp));
    if (emit_dot) write_file(fs::path(out) / "network.dot", to_dot(g, inst));
  }
  switch (r.status) {
    case SolveStatus::optimal: return kOk;
    case SolveStatus::infeasible: return kInfeasible;
    case SolveStatus::time_limit: return kTimeLimit;
  }
  return kError;
}

int cmd_solve_qubo(const std::string& path, const Overrides& o, const SamplerFlags& f, const std::string& out,
                   bool compare_exact) {
  Instance inst = load(path, o);
  AnnealParams params;
  params.num_reads = f.reads;
  params.sweeps = f.sweeps;
  params.seed = f.seed;
  params.threads = f.threads;
  params.beta_min = f.beta_min;
  params.beta_max = f.beta_max;
  Lambdas lambdas = lambdas_of(o);
  SamplingResult res = sample_portfolio(inst, lambdas, params);
  Hypergraph g = build_hypergraph(inst);
  IlpModel ilp = build_ilp(g, inst);

  std::size_t feasible_reads = 0;
  for (const Sample& s : res.samples.samples)
    if (check_feasibility(ilp, std::span(s.y).first(ilp.num_vars)).feasible()) feasible_reads += s.multiplicity;
  json summary = {{"reads", res.samples.num_reads},
                  {"distinct_samples", res.samples.samples.size()},
                  {"portfolio_size", res.portfolio.solutions.size()},
                  {"rejected", res.rejected.size()},
                  {"feasible_read_fraction",
                   res.samples.num_reads ? static_cast<double>(feasible_reads) / res.samples.num_reads : 0.0}};
  if (!res.samples.samples.empty()) {
    const Rational& best = res.samples.samples.front().energy;
    summary["lowest_energy"] = to_string(best);
    summary["lowest_energy_hit_rate"] = res.samples.hit_rate(best);
  }
  if (!res.portfolio.solutions.empty()) summary["best_objective"] = to_string(res.portfolio.solutions[0].objective);
  if (compare_exact) {
    ExactResult ex = solve_exact(ilp);
    if (ex.solution) {
      summary["exact_optimum"] = to_string(ex.solution->objective);
      summary["success_probability"] = res.samples.hit_rate(ex.solution->objective);
    }
  }

  std::cout << "reads: " << res.samples.num_reads << ", portfolio: " << res.portfolio.solutions.size()
            << ", rejected: " << res.rejected.size() << "\n";
  for (const Solution& s : res.portfolio.solutions)
    std::cout << "  " << to_string(s.objective) << "  " << arc_list(inst, g, ilp, s.x) << "\n";
  if (summary.contains("success_probability"))
    std::cout << "success probability: " << summary["success_probability"].get<double>() << "\n";
  std::cout << "time: build " << res.timings.build << " s, encode " << res.timings.encode << " s, anneal "
            << res.timings.anneal << " s, decode " << res.timings.decode << " s\n";

  if (!out.empty()) {
    write_file(fs::path(out) / "portfolio.json", dump(portfolio_json(inst, g, ilp, res.portfolio)));
    write_file(fs::path(out) / "rejected.json", dump(rejected_json(ilp, res.rejected)));
    write_file(fs::path(out) / "summary.json", dump(summary));
    json timing = {{"build_seconds", res.timings.build},
                   {"encode_seconds", res.timings.encode},
                   {"anneal_seconds", res.timings.anneal},
                   {"decode_seconds", res.timings.decode}};
    write_file(fs::path(out) / "timing.json", dump(timing));
  }
  return kOk;
}

int cmd_enumerate(const std::string& path, const Overrides& o, std::size_t max_count, double time_limit,
                  const std::string& out) {
  Instance inst = load(path, o);
  Hypergraph g = build_hypergraph(inst);
  IlpModel ilp = build_ilp(g, inst);
  SolutionPortfolio p = enumerate_feasible(ilp, max_count, time_limit);
  std::cout << p.solutions.size() << " feasible solution(s)" << (p.exhaustive ? "" : " (incomplete)") << "\n";
  for (const Solution& s : p.solutions) std::cout << "  " << to_string(s.objective) << "  " << arc_list(inst, g, ilp, s.x) << "\n";
  if (!out.empty()) write_file(fs::path(out) / "portfolio.json", dump(portfolio_json(inst, g, ilp, p)));
  if (p.solutions.empty()) return p.exhaustive ? kInfeasible : kTimeLimit;
  return p.exhaustive ? kOk : kTimeLimit;
}

int cmd_report(const std::vector<std::string>& paths, const Overrides& o, const std::string& format,
               const std::string& out) {
  const std::vector<std::string> head = {"instance", "|T|", "|T'|/|T''|", "|D|", "|R|", "delta", "Delta",
                                         "ILP vars", "QUBO vars/terms"};
  std::vector<std::vector<std::string>> rows;
  Lambdas lambdas = lambdas_of(o);
  for (const std::string& path : paths) {
    Instance inst = load(path, o);
    Hypergraph g = build_hypergraph(inst);
    IlpModel ilp = build_ilp(g, inst);
    QuboModel q = encode_qubo(ilp, lambdas);
    ScalingReport s = scaling_report(inst, g, ilp, q);
    rows.push_back({fs::path(path).stem().string(), std::to_string(s.trips),
                    std::to_string(s.single_trips) + "/" + std::to_string(s.couplable_trips), std::to_string(s.depots),
                    std::to_string(s.types), std::to_string(s.delta_min), std::to_string(s.delta_max),
                    std::to_string(s.ilp_vars), std::to_string(s.qubo_vars) + "/" + std::to_string(s.qubo_terms)});
  }
  std::string text;
  auto join = [](const std::vector<std::string>& cells, const std::string& sep) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? sep : "") + cells[i];
    return line;
  };
  if (format == "md") {
    text += "| " + join(head, " | ") + " |\n|";
    for (std::size_t i = 0; i < head.size(); ++i) text += "---|";
    text += "\n";
    for (const auto& r : rows) text += "| " + join(r, " | ") + " |\n";
  } else {
    text += join(head, ",") + "\n";
    for (const auto& r : rows) text += join(r, ",") + "\n";
  }
  emit(out, text);
  return kOk;
}

int cmd_diagram(const std::string& path, const std::string& solution_path, const Overrides& o,
                const std::string& out) {
  Instance inst = load(path, o);
  Hypergraph g = build_hypergraph(inst);
  IlpModel ilp = build_ilp(g, inst);
  std::ifstream in(solution_path);
  if (!in) throw std::runtime_error("cannot open solution file: " + solution_path);
  json doc = json::parse(in);
  const json& sol = doc.contains("solution") ? doc.at("solution") : doc;
  Assignment x(ilp.num_vars);  // a null solution draws an empty diagram
  if (!sol.is_null()) x = read_solution(sol, inst, g, ilp);
  std::vector<ArcId> selected;
  for (VarIndex i = 0; i < ilp.num_vars; ++i)
    if (x[i]) selected.push_back(ilp.var_arc[i]);
  RotationPlan plan = trace_rotations(g, inst, selected);
  std::string ascii = render_ascii(inst, plan);
  std::cout << ascii;
  if (!out.empty()) {
    write_file(fs::path(out) / "diagram.svg", render_svg(inst, plan));
    write_file(fs::path(out) / "diagram.txt", ascii);
  }
  return kOk;
}

int cmd_export_lp(const std::string& path, const Overrides& o, const std::string& out) {
  Instance inst = load(path, o);
  Hypergraph g = build_hypergraph(inst);
  emit(out, export_lp(build_ilp(g, inst)));
  return kOk;
}

int cmd_export_qubo(const std::string& path, const Overrides& o, bool ising, const std::string& out) {
  Instance inst = load(path, o);
  Hypergraph g = build_hypergraph(inst);
  QuboModel q = encode_qubo(build_ilp(g, inst), lambdas_of(o));
  emit(out, ising ? export_ising_coo(to_ising(q)) : export_qubo_coo(q));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Rolling-stock circulation: hypergraph ILP, exact solver, QUBO and simulated annealing"};
  app.require_subcommand(1);

  Overrides o;
  SamplerFlags f;
  std::string instance, out, format = "csv", solution_path;
  std::vector<std::string> instances;
  double time_limit = 0;
  std::size_t max_count = 1000;
  bool emit_lp = false, emit_dot = false, ising = false, compare_exact = false;
  GeneratorConfig gen;
  std::string gen_alpha;
  std::uint64_t gen_seed = 1;

  auto add_overrides = [&](CLI::App* c, bool with_lambdas) {
    c->add_option("--alpha", o.alpha, "Objective weight alpha (rational, e.g. 0.01 or 1/100)");
    c->add_option("--delta-max", o.delta_max, "Override the maximal turnaround Delta (minutes)");
    if (with_lambdas)
      for (std::size_t i = 0; i < 5; ++i)
        c->add_option("--lambda" + std::to_string(i + 1), o.lambdas[i], "Penalty weight (default 100)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  validate_cmd->add_option("instance", instance, "Instance JSON")->required();
  add_overrides(validate_cmd, false);

  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic instance");
  generate_cmd->add_option("--trips", gen.num_trips, "Number of trips")->capture_default_str();
  generate_cmd->add_option("--couplable", gen.num_couplable, "Trips allowing coupled pairs")->capture_default_str();
  generate_cmd->add_option("--types", gen.num_types, "EMU types")->capture_default_str();
  generate_cmd->add_option("--depots", gen.num_depots, "Depots")->capture_default_str();
  generate_cmd->add_option("--delta-max", gen.delta_max, "Maximal turnaround (minutes)")->capture_default_str();
  generate_cmd->add_option("--alpha", gen_alpha, "Objective weight alpha");
  generate_cmd->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  generate_cmd->add_option("--out", out, "Output file (default stdout)");

  auto* ilp_cmd = app.add_subcommand("solve-ilp", "Solve the ILP to optimality by branch and bound");
  ilp_cmd->add_option("instance", instance, "Instance JSON")->required();
  add_overrides(ilp_cmd, false);
  ilp_cmd->add_option("--time-limit", time_limit, "Seconds (0 = none)")->capture_default_str();
  ilp_cmd->add_option("--out", out, "Output directory for solution.json and timing.json");
  ilp_cmd->add_flag("--emit-lp", emit_lp, "Also write model.lp");
  ilp_cmd->add_flag("--emit-dot", emit_dot, "Also write network.dot");

  auto* qubo_cmd = app.add_subcommand("solve-qubo", "Sample the QUBO with simulated annealing");
  qubo_cmd->add_option("instance", instance, "Instance JSON")->required();
  add_overrides(qubo_cmd, true);
  qubo_cmd->add_option("--reads", f.reads, "Independent reads")->capture_default_str();
  qubo_cmd->add_option("--sweeps", f.sweeps, "Sweeps per read")->capture_default_str();
  qubo_cmd->add_option("--seed", f.seed, "Sampler seed")->capture_default_str();
  qubo_cmd->add_option("--threads", f.threads, "Worker threads")->capture_default_str();
  qubo_cmd->add_option("--beta-min", f.beta_min, "Initial inverse temperature")->capture_default_str();
  qubo_cmd->add_option("--beta-max", f.beta_max, "Final inverse temperature")->capture_default_str();
  qubo_cmd->add_flag("--compare-exact", compare_exact, "Solve exactly and report the success probability");
  qubo_cmd->add_option("--out", out, "Output directory for portfolio, rejected log and summary");

  auto* enum_cmd = app.add_subcommand("enumerate", "List all feasible solutions");
  enum_cmd->add_option("instance", instance, "Instance JSON")->required();
  add_overrides(enum_cmd, false);
  enum_cmd->add_option("--max", max_count, "Stop after this many solutions")->capture_default_str();
  enum_cmd->add_option("--time-limit", time_limit, "Seconds (0 = none)")->capture_default_str();
  enum_cmd->add_option("--out", out, "Output directory for portfolio.json");

  auto* report_cmd = app.add_subcommand("report", "Instance size table");
  report_cmd->add_option("instances", instances, "Instance JSON files");
  add_overrides(report_cmd, true);
  report_cmd->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}))->capture_default_str();
  report_cmd->add_option("--out", out, "Output file (default stdout)");

  auto* diagram_cmd = app.add_subcommand("diagram", "Train diagram of a solution");
  diagram_cmd->add_option("instance", instance, "Instance JSON")->required();
  diagram_cmd->add_option("solution", solution_path, "Solution JSON written by solve-ilp")->required();
  add_overrides(diagram_cmd, false);
  diagram_cmd->add_option("--out", out, "Output directory for diagram.svg and diagram.txt");

  auto* lp_cmd = app.add_subcommand("export-lp", "Write the ILP in LP format");
  lp_cmd->add_option("instance", instance, "Instance JSON")->required();
  add_overrides(lp_cmd, false);
  lp_cmd->add_option("--out", out, "Output file (default stdout)");

  auto* qexp_cmd = app.add_subcommand("export-qubo", "Write the QUBO (or Ising model) as COO text");
  qexp_cmd->add_option("instance", instance, "Instance JSON")->required();
  add_overrides(qexp_cmd, true);
  qexp_cmd->add_flag("--ising", ising, "Export the Ising form");
  qexp_cmd->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*validate_cmd) return cmd_validate(instance, o);
    if (*generate_cmd) {
      if (!gen_alpha.empty()) gen.alpha = parse_rational(gen_alpha);
      return cmd_generate(gen, gen_seed, out);
    }
    if (*ilp_cmd) return cmd_solve_ilp(instance, o, time_limit, out, emit_lp, emit_dot);
    if (*qubo_cmd) return cmd_solve_qubo(instance, o, f, out, compare_exact);
    if (*enum_cmd) return cmd_enumerate(instance, o, max_count, time_limit, out);
    if (*report_cmd) return cmd_report(instances, o, format, out);
    if (*diagram_cmd) return cmd_diagram(instance, solution_path, o, out);
    if (*lp_cmd) return cmd_export_lp(instance, o, out);
    if (*qexp_cmd) return cmd_export_qubo(instance, o, ising, out);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kError;
  }
  return kError;
}
