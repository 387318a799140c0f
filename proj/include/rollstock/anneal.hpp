#pragma once

// Simulated annealing over a QuboModel (single-flip Metropolis, geometric
// inverse-temperature schedule) and the post-filtered sampling pipeline.

#include "rollstock/exact.hpp"
#include "rollstock/qubo.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rollstock {

struct AnnealParams {
  std::size_t num_reads = 100;
  std::size_t sweeps = 1000;
  double beta_min = 0.01;
  double beta_max = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;  // reads are split across threads; results do not depend on it
};

struct Sample {
  Assignment y;
  Rational energy = 0;
  std::size_t multiplicity = 0;
};

struct SampleSet {
  std::vector<Sample> samples;  // distinct, ascending energy
  std::size_t num_reads = 0;

  /// Fraction of reads whose final state has energy <= target.
  double hit_rate(const Rational& target) const {
    if (num_reads == 0) return 0;
    std::size_t hits = 0;
    for (const Sample& s : samples)
      if (s.energy <= target) hits += s.multiplicity;
    return static_cast<double>(hits) / static_cast<double>(num_reads);
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of read `index`; mixing keeps (seed, index) pairs from colliding
/// across nearby seeds.
inline std::uint64_t read_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ index);
}

struct SparseQubo {
  std::vector<double> diag;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;

  explicit SparseQubo(const QuboModel& m) : diag(m.num_vars(), 0), adj(m.num_vars()) {
    for (const auto& [key, v] : m.q) {
      double w = to_double(v);
      if (key.first == key.second) {
        diag[key.first] += w;
      } else {
        adj[key.first].push_back({key.second, w});
        adj[key.second].push_back({key.first, w});
      }
    }
  }
};

inline Assignment anneal_read(const SparseQubo& q, const AnnealParams& p, std::uint64_t seed) {
  const std::size_t n = q.diag.size();
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Assignment y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<std::uint8_t>(rng() >> 63);
  std::vector<double> field(n, 0);  // sum_j q_ij y_j over neighbours
  for (std::size_t i = 0; i < n; ++i)
    if (y[i])
      for (auto [j, w] : q.adj[i]) field[j] += w;

  for (std::size_t s = 0; s < p.sweeps; ++s) {
    double beta = p.sweeps == 1 ? p.beta_max
                                : p.beta_min * std::pow(p.beta_max / p.beta_min,
                                                        static_cast<double>(s) / static_cast<double>(p.sweeps - 1));
    for (std::size_t i = 0; i < n; ++i) {
      double gain = q.diag[i] + field[i];  // energy change of 0 -> 1
      double delta = y[i] ? -gain : gain;
      if (delta > 0 && uniform() >= std::exp(-beta * delta)) continue;
      y[i] ^= 1;
      double sign = y[i] ? 1.0 : -1.0;
      for (auto [j, w] : q.adj[i]) field[j] += sign * w;
    }
  }
  return y;
}

}  // namespace detail

/// Independent Metropolis chains; deterministic for fixed (model, params).
/// Energies of the returned samples are recomputed exactly.
inline SampleSet anneal(const QuboModel& model, const AnnealParams& params) {
  if (params.num_reads < 1) throw std::invalid_argument("anneal: num_reads must be at least 1");
  if (!(params.beta_min > 0) || !(params.beta_min <= params.beta_max))
    throw std::invalid_argument("anneal: need 0 < beta_min <= beta_max");
  detail::SparseQubo q(model);
  std::vector<Assignment> finals(params.num_reads);
  unsigned threads = std::max(1u, params.threads);
  auto work = [&](unsigned t) {
    for (std::size_t r = t; r < params.num_reads; r += threads)
      finals[r] = detail::anneal_read(q, params, detail::read_seed(params.seed, r));
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  std::map<Assignment, std::size_t> counts;
  for (auto& y : finals) ++counts[y];
  SampleSet set;
  set.num_reads = params.num_reads;
  for (auto& [y, c] : counts) set.samples.push_back(Sample{y, qubo_energy(model, y), c});
  std::stable_sort(set.samples.begin(), set.samples.end(),
                   [](const Sample& a, const Sample& b) { return a.energy < b.energy; });
  return set;
}

struct RejectedSample {
  DecodedSample decoded;
  std::size_t multiplicity = 0;
  std::vector<RowKind> violated;  // empty when only the slack bits are wrong
};

struct StageTimings {
  double build = 0;
  double encode = 0;
  double anneal = 0;
  double decode = 0;
};

struct SamplingResult {
  SolutionPortfolio portfolio;  // feasible, slack-consistent, distinct x
  std::vector<RejectedSample> rejected;
  SampleSet samples;
  StageTimings timings;
};

/// Decodes a sample set: feasible slack-consistent states become portfolio
/// entries, everything else goes to the rejected log.
inline SamplingResult filter_samples(const IlpModel& ilp, const QuboModel& qubo, SampleSet samples) {
  SamplingResult out;
  std::map<Assignment, bool> seen;
  for (const Sample& s : samples.samples) {
    DecodedSample d = decode(qubo, ilp, s.y);
    if (d.feasible() && d.slack_consistent) {
      if (!seen.emplace(d.x, true).second) continue;
      out.portfolio.solutions.push_back(make_solution(ilp, d.x));
    } else {
      RejectedSample r;
      r.violated = d.report.violated_families();
      r.decoded = std::move(d);
      r.multiplicity = s.multiplicity;
      out.rejected.push_back(std::move(r));
    }
  }
  sort_portfolio(out.portfolio.solutions);
  out.portfolio.exhaustive = false;
  out.samples = std::move(samples);
  return out;
}

/// build -> encode -> anneal -> decode for one instance.
inline SamplingResult sample_portfolio(const Instance& inst, const Lambdas& lambdas, const AnnealParams& params) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) { return std::chrono::duration<double>(b - a).count(); };
  auto t0 = clock::now();
  Hypergraph g = build_hypergraph(inst);
  IlpModel ilp = build_ilp(g, inst);
  auto t1 = clock::now();
  QuboModel qubo = encode_qubo(ilp, lambdas);
  auto t2 = clock::now();
  SampleSet samples = qubo.num_vars() == 0 ? SampleSet{} : anneal(qubo, params);
  auto t3 = clock::now();
  SamplingResult out = filter_samples(ilp, qubo, std::move(samples));
  auto t4 = clock::now();
  out.timings = {seconds(t0, t1), seconds(t1, t2), seconds(t2, t3), seconds(t3, t4)};
  return out;
}

}  // namespace rollstock
