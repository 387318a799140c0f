#pragma once

// Exact solvers over an IlpModel: depth-first branch-and-bound with row
// bound propagation, exhaustive enumeration of the feasible set, and a
// brute-force oracle for small models.

#include "rollstock/ilp.hpp"
#include "rollstock/lp.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rollstock {

struct Solution {
  Assignment x;
  Rational objective = 0;
  FeasibilityReport report;
  std::vector<ArcId> decoded;  // selected arcs
};

struct SolutionPortfolio {
  std::vector<Solution> solutions;  // ascending objective
  bool exhaustive = false;
};

enum class SolveStatus { optimal, time_limit, infeasible };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "?";
}

struct ExactResult {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;  // best known; empty if none found
  bool optimal = false;
  std::optional<Rational> lower_bound;  // combinatorial bound at the root
  std::optional<double> lp_bound;       // root LP relaxation value
  std::uint64_t nodes = 0;
  double seconds = 0;
};

inline Solution make_solution(const IlpModel& model, Assignment x) {
  Solution s;
  s.objective = objective_value(model, x);
  s.report = check_feasibility(model, x);
  for (VarIndex i = 0; i < model.num_vars; ++i)
    if (x[i]) s.decoded.push_back(model.var_arc.empty() ? i : model.var_arc[i]);
  s.x = std::move(x);
  return s;
}

/// Ascending objective, ties by selected-arc list.
inline void sort_portfolio(std::vector<Solution>& solutions) {
  std::sort(solutions.begin(), solutions.end(), [](const Solution& a, const Solution& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return a.decoded < b.decoded;
  });
}

namespace detail {

inline BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

/// Objective scaled to integers by the lcm of its denominators.
struct ScaledObjective {
  std::vector<std::int64_t> coef;
  BigInt scale = 1;
  bool nonnegative = true;

  explicit ScaledObjective(const std::vector<Rational>& objective) {
    for (const Rational& c : objective) scale = lcm_big(scale, boost::multiprecision::denominator(c));
    BigInt total = 0;
    for (const Rational& c : objective) {
      BigInt v = boost::multiprecision::numerator(c) * (scale / boost::multiprecision::denominator(c));
      total += v < 0 ? BigInt(-v) : v;
      if (total > BigInt(std::numeric_limits<std::int64_t>::max() / 4))
        throw std::overflow_error("objective coefficients too large for the exact solver");
      coef.push_back(v.convert_to<std::int64_t>());
      if (v < 0) nonnegative = false;
    }
  }
};

class Search {
 public:
  Search(const IlpModel& model, double time_limit)
      : model_(model), obj_(model.objective), time_limit_(time_limit), start_(std::chrono::steady_clock::now()) {
    const std::size_t n = model.num_vars;
    const std::size_t m = model.constraints.size();
    var_rows_.resize(n);
    lo_.resize(m);
    hi_.resize(m);
    act_.assign(m, 0);
    min_free_.assign(m, 0);
    max_free_.assign(m, 0);
    max_abs_.assign(m, 0);
    queued_.assign(m, false);
    for (std::size_t r = 0; r < m; ++r) {
      const ConstraintRow& row = model.constraints[r];
      lo_[r] = row.lower();
      hi_[r] = row.upper();
      for (const Term& t : row.coeffs) {
        if (t.var >= n) throw std::invalid_argument("constraint references unknown variable");
        var_rows_[t.var].push_back({r, t.coef});
        (t.coef > 0 ? max_free_[r] : min_free_[r]) += t.coef;
        max_abs_[r] = std::max(max_abs_[r], t.coef < 0 ? -t.coef : t.coef);
      }
      bool cover_like = row.kind == RowKind::coverage && lo_[r] == 1 && hi_[r] == 1 && !row.coeffs.empty() &&
                        std::all_of(row.coeffs.begin(), row.coeffs.end(), [](const Term& t) { return t.coef == 1; });
      if (cover_like) cover_rows_.push_back(r);
      bool out_like = row.kind == RowKind::out_degree && hi_[r] == 1 &&
                      std::all_of(row.coeffs.begin(), row.coeffs.end(), [](const Term& t) { return t.coef == 1; });
      if (out_like) out_rows_.push_back(r);
    }
    val_.assign(n, -1);

    std::vector<int> cover_count(n, 0);
    for (std::size_t r : cover_rows_)
      for (const Term& t : model.constraints[r].coeffs) ++cover_count[t.var];
    std::int64_t share_scale = 1;
    for (int c : cover_count)
      if (c > 0) share_scale = std::lcm(share_scale, static_cast<std::int64_t>(c));
    share_scale_ = share_scale;
    share_.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j)
      if (cover_count[j] > 0) share_[j] = obj_.coef[j] * share_scale_ / cover_count[j];
    var_out_.resize(n);
    for (std::size_t k = 0; k < out_rows_.size(); ++k)
      for (const Term& t : model.constraints[out_rows_[k]].coeffs) var_out_[t.var].push_back(k);
    multi_cover_.assign(n, false);
    for (std::size_t j = 0; j < n; ++j) multi_cover_[j] = cover_count[j] >= 2;
  }

  bool root_propagate() {
    for (std::size_t r = 0; r < model_.constraints.size(); ++r) enqueue(r);
    return propagate();
  }

  // Branch-and-bound; returns false if stopped by the time limit.
  bool optimize() {
    stopped_ = false;
    if (root_propagate()) {
      root_bound_ = lower_bound();
      if (use_lp_) solve_root_lp();
      dfs_optimize();
    }
    return !stopped_;
  }

  // Exhaustive enumeration; returns false if stopped early.
  bool enumerate(std::size_t max_count, std::vector<Assignment>& out) {
    stopped_ = false;
    max_count_ = max_count;
    found_ = &out;
    if (root_propagate()) dfs_enumerate();
    return !stopped_;
  }

  const std::optional<Assignment>& incumbent() const { return best_x_; }
  /// Root lower bound on the objective; nullopt if the root is infeasible.
  std::optional<Rational> root_bound() const {
    if (root_bound_ == kInf) return std::nullopt;
    return Rational(BigInt(root_bound_), obj_.scale * share_scale_);
  }
  std::uint64_t nodes() const { return nodes_; }
  std::optional<double> lp_bound() const {
    if (!lp_) return std::nullopt;
    return lp_->value;
  }
  void set_use_lp(bool on) { use_lp_ = on; }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

  const IlpModel& model_;
  ScaledObjective obj_;
  double time_limit_;
  std::chrono::steady_clock::time_point start_;

  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> var_rows_;
  std::vector<std::int64_t> lo_, hi_, act_, min_free_, max_free_, max_abs_;
  std::vector<bool> queued_;
  std::vector<std::size_t> queue_;
  std::vector<int> val_;
  std::vector<VarIndex> trail_;
  std::int64_t committed_ = 0;

  std::vector<std::size_t> cover_rows_;
  std::vector<std::size_t> out_rows_;
  std::vector<std::vector<std::size_t>> var_out_;  // var -> positions in out_rows_
  std::vector<bool> multi_cover_;
  std::vector<std::int64_t> share_;
  std::int64_t share_scale_ = 1;

  std::optional<Assignment> best_x_;
  std::int64_t best_ = kInf;
  std::int64_t root_bound_ = kInf;

  bool use_lp_ = true;
  std::optional<LpRelaxation> lp_;
  double lp_margin_ = 0;
  double unit_ = 1;  // objective granularity 1/scale
  std::vector<double> col_lo_, col_hi_;
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
  std::size_t max_count_ = 0;
  std::vector<Assignment>* found_ = nullptr;

  void enqueue(std::size_t r) {
    if (!queued_[r]) {
      queued_[r] = true;
      queue_.push_back(r);
    }
  }

  void fix(VarIndex j, int v) {
    val_[j] = v;
    trail_.push_back(j);
    if (v) committed_ += obj_.coef[j];
    for (auto [r, a] : var_rows_[j]) {
      (a > 0 ? max_free_[r] : min_free_[r]) -= a;
      if (v) act_[r] += a;
      enqueue(r);
    }
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      VarIndex j = trail_.back();
      trail_.pop_back();
      int v = val_[j];
      if (v) committed_ -= obj_.coef[j];
      for (auto [r, a] : var_rows_[j]) {
        (a > 0 ? max_free_[r] : min_free_[r]) += a;
        if (v) act_[r] -= a;
      }
      val_[j] = -1;
    }
  }

  bool propagate() {
    while (!queue_.empty()) {
      std::size_t r = queue_.back();
      queue_.pop_back();
      queued_[r] = false;
      std::int64_t slack_hi = hi_[r] - (act_[r] + min_free_[r]);
      std::int64_t slack_lo = act_[r] + max_free_[r] - lo_[r];
      if (slack_hi < 0 || slack_lo < 0) {
        for (std::size_t q : queue_) queued_[q] = false;
        queue_.clear();
        return false;
      }
      if (max_abs_[r] <= std::min(slack_hi, slack_lo)) continue;
      for (const Term& t : model_.constraints[r].coeffs) {
        if (val_[t.var] >= 0) continue;
        std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
        bool up_hurts = t.coef > 0 ? mag > slack_hi : mag > slack_lo;
        bool down_hurts = t.coef > 0 ? mag > slack_lo : mag > slack_hi;
        if (up_hurts) {
          fix(t.var, 0);
          break;
        }
        if (down_hurts) {
          fix(t.var, 1);
          break;
        }
      }
    }
    return true;
  }

  bool out_of_time() {
    if (stopped_) return true;
    if (time_limit_ > 0 && (nodes_ & 255) == 0 && elapsed() > time_limit_) stopped_ = true;
    return stopped_;
  }

  bool covered(std::size_t r) const { return act_[r] >= 1; }

  // Candidates of the row that the all-zero completion violates with the
  // fewest ways to repair it; empty if that completion is feasible.
  std::vector<VarIndex> pick_violated_row() const {
    std::vector<VarIndex> best;
    bool found = false;
    std::vector<VarIndex> cands;
    for (std::size_t r = 0; r < lo_.size(); ++r) {
      bool need_up = act_[r] < lo_[r];
      bool need_down = act_[r] > hi_[r];
      if (!need_up && !need_down) continue;
      cands.clear();
      for (const Term& t : model_.constraints[r].coeffs)
        if (val_[t.var] < 0 && (need_up ? t.coef > 0 : t.coef < 0)) cands.push_back(t.var);
      if (!found || cands.size() < best.size()) {
        best = cands;
        found = true;
        if (best.size() <= 1) break;
      }
    }
    std::stable_sort(best.begin(), best.end(), [&](VarIndex a, VarIndex b) {
      if (lp_ && lp_->primal[a] != lp_->primal[b]) return lp_->primal[a] > lp_->primal[b];
      return obj_.coef[a] < obj_.coef[b];
    });
    return best;
  }

  VarIndex first_free() const {
    for (VarIndex j = 0; j < val_.size(); ++j)
      if (val_[j] < 0) return j;
    return val_.size();
  }

  // Bipartite bound: open out-degree rows (capacity 1, or 2 with a free
  // two-target arc) feeding uncovered coverage rows.
  std::size_t max_sourced(const std::vector<std::size_t>& rows,
                          const std::vector<std::vector<std::size_t>>& adj) const {
    std::vector<int> cap(out_rows_.size(), 0);
    for (const auto& list : adj)
      for (std::size_t s : list) cap[s] = 1;
    for (std::size_t s = 0; s < out_rows_.size(); ++s) {
      if (!cap[s]) continue;
      for (const Term& t : model_.constraints[out_rows_[s]].coeffs)
        if (val_[t.var] < 0 && multi_cover_[t.var]) {
          cap[s] = 2;
          break;
        }
    }
    std::vector<std::vector<std::size_t>> assigned(out_rows_.size());
    std::vector<int> visit(out_rows_.size(), -1);
    std::size_t matched = 0;
    std::function<bool(std::size_t, int)> augment = [&](std::size_t c, int stamp) -> bool {
      for (std::size_t s : adj[c]) {
        if (visit[s] == stamp) continue;
        visit[s] = stamp;
        if (static_cast<int>(assigned[s].size()) < cap[s]) {
          assigned[s].push_back(c);
          return true;
        }
        for (std::size_t& other : assigned[s]) {
          if (augment(other, stamp)) {
            other = c;
            return true;
          }
        }
      }
      return false;
    };
    for (std::size_t c = 0; c < rows.size(); ++c)
      if (augment(c, static_cast<int>(c))) ++matched;
    return matched;
  }

  void solve_root_lp() {
    std::vector<double> xlo(val_.size()), xhi(val_.size());
    for (VarIndex j = 0; j < val_.size(); ++j) {
      xlo[j] = val_[j] == 1 ? 1 : 0;
      xhi[j] = val_[j] == 0 ? 0 : 1;
    }
    lp_ = solve_lp_relaxation(model_, xlo, xhi);
    if (!lp_) return;
    double magnitude = 1;
    for (double c : lp_->reduced) magnitude += std::abs(c);
    lp_margin_ = 1e-9 * magnitude + 1e-7 * (1 + std::abs(lp_->value));
    unit_ = 1 / obj_.scale.convert_to<double>();
    col_lo_.assign(lp_->primal.size(), 0);
    col_hi_.assign(lp_->primal.size(), 0);
  }

  // Reduced-cost bound of the root LP under the node's variable fixings
  // and row activity ranges.
  double lp_node_bound() {
    const std::size_t n = val_.size();
    for (VarIndex j = 0; j < n; ++j) {
      col_lo_[j] = val_[j] == 1 ? 1 : 0;
      col_hi_[j] = val_[j] == 0 ? 0 : 1;
    }
    for (std::size_t r = 0; r < lo_.size(); ++r) {
      col_lo_[n + r] = static_cast<double>(std::max(lo_[r], act_[r] + min_free_[r]));
      col_hi_[n + r] = static_cast<double>(std::min(hi_[r], act_[r] + max_free_[r]));
    }
    return lp_->bound(col_lo_, col_hi_) - lp_margin_;
  }

  // True if no completion of this node can beat the incumbent strictly.
  bool prune() {
    std::int64_t lb = lower_bound();
    if (lb == kInf) return true;
    if (!best_x_) return false;
    if (lb > (best_ - 1) * share_scale_) return true;
    if (lp_ && lp_node_bound() > static_cast<double>(best_ - 1) * unit_) return true;
    return false;
  }

  // Lower bound in units of share_scale_ * objective scale; kInf if the
  // node is provably infeasible.
  std::int64_t lower_bound() const {
    std::int64_t lb = committed_ * share_scale_;
    if (!obj_.nonnegative) {
      for (VarIndex j = 0; j < val_.size(); ++j)
        if (val_[j] < 0 && obj_.coef[j] < 0) lb += obj_.coef[j] * share_scale_;
      return lb;
    }
    std::vector<std::size_t> flow_rows;
    std::vector<std::vector<std::size_t>> adj;
    std::int64_t min_gap = kInf;
    for (std::size_t r : cover_rows_) {
      if (covered(r)) continue;
      std::int64_t m_src = kInf;
      std::int64_t m_free = kInf;
      std::vector<std::size_t> sources;
      for (const Term& t : model_.constraints[r].coeffs) {
        VarIndex j = t.var;
        if (val_[j] >= 0) continue;
        if (var_out_[j].empty()) {
          m_free = std::min(m_free, share_[j]);
        } else {
          m_src = std::min(m_src, share_[j]);
          for (std::size_t s : var_out_[j]) sources.push_back(s);
        }
      }
      if (m_src == kInf) {
        if (m_free == kInf) return kInf;
        lb += m_free;
        continue;
      }
      lb += m_src;
      if (m_free != kInf) min_gap = std::min(min_gap, std::max<std::int64_t>(0, m_free - m_src));
      std::sort(sources.begin(), sources.end());
      sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
      flow_rows.push_back(r);
      adj.push_back(std::move(sources));
    }
    if (flow_rows.empty()) return lb;
    std::size_t sourced = max_sourced(flow_rows, adj);
    std::size_t excess = flow_rows.size() - sourced;
    if (excess == 0 || min_gap == 0) return lb;
    if (min_gap == kInf) return kInf;
    return lb + static_cast<std::int64_t>(excess) * min_gap;
  }

  void record_incumbent() {
    Assignment x(val_.size());
    for (VarIndex j = 0; j < val_.size(); ++j) x[j] = static_cast<std::uint8_t>(val_[j] == 1);
    best_ = committed_;
    best_x_ = std::move(x);
  }

  // Tries x[cands[i]] = 1 with cands[0..i) = 0 for each i, which
  // partitions the completions that repair the chosen row.
  template <typename Recurse>
  void branch_on_row(const std::vector<VarIndex>& cands, Recurse&& recurse) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      std::size_t mark = trail_.size();
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        if (val_[cands[k]] == 1) ok = false;
        else if (val_[cands[k]] < 0) fix(cands[k], 0);
      }
      if (ok && val_[cands[i]] == 0) ok = false;
      if (ok && val_[cands[i]] < 0) fix(cands[i], 1);
      if (ok && propagate()) recurse();
      else {
        for (std::size_t q : queue_) queued_[q] = false;
        queue_.clear();
      }
      undo(mark);
      if (stopped_) return;
    }
  }

  template <typename Recurse>
  void branch_on_var(VarIndex j, bool up_first, Recurse&& recurse) {
    for (int v : {up_first ? 1 : 0, up_first ? 0 : 1}) {
      std::size_t mark = trail_.size();
      fix(j, v);
      if (propagate()) recurse();
      undo(mark);
      if (stopped_) return;
    }
  }

  void dfs_optimize() {
    ++nodes_;
    if (out_of_time()) return;
    if (prune()) return;
    auto cands = pick_violated_row();
    if (!cands.empty()) {
      branch_on_row(cands, [this] { dfs_optimize(); });
      return;
    }
    if (obj_.nonnegative || first_free() == val_.size()) {
      // The all-zero completion is feasible and, with nonnegative costs,
      // the cheapest one in this subtree.
      if (!best_x_ || committed_ < best_) record_incumbent();
      if (obj_.nonnegative) return;
    }
    VarIndex j = first_free();
    if (j < val_.size()) branch_on_var(j, obj_.coef[j] < 0, [this] { dfs_optimize(); });
  }

  void dfs_enumerate() {
    ++nodes_;
    if (out_of_time()) return;
    auto cands = pick_violated_row();
    if (!cands.empty()) {
      branch_on_row(cands, [this] { dfs_enumerate(); });
      return;
    }
    VarIndex j = first_free();
    if (j < val_.size()) {
      branch_on_var(j, false, [this] { dfs_enumerate(); });
      return;
    }
    if (found_->size() >= max_count_) {
      stopped_ = true;
      return;
    }
    Assignment x(val_.size());
    for (VarIndex k = 0; k < val_.size(); ++k) x[k] = static_cast<std::uint8_t>(val_[k] == 1);
    found_->push_back(std::move(x));
  }
};

}  // namespace detail

/// Provably optimal solution by branch-and-bound. time_limit <= 0 means no
/// limit. On timeout the best known solution is returned with optimal=false.
inline ExactResult solve_exact(const IlpModel& model, double time_limit = 0) {
  detail::Search search(model, time_limit);
  bool complete = search.optimize();
  ExactResult result;
  result.nodes = search.nodes();
  result.seconds = search.elapsed();
  result.lower_bound = search.root_bound();
  result.lp_bound = search.lp_bound();
  if (search.incumbent()) result.solution = make_solution(model, *search.incumbent());
  if (complete) {
    result.status = result.solution ? SolveStatus::optimal : SolveStatus::infeasible;
    result.optimal = result.solution.has_value();
  } else {
    result.status = SolveStatus::time_limit;
  }
  return result;
}

/// Every feasible assignment, up to max_count; exhaustive=false when the
/// budget or time limit cut the search short.
inline SolutionPortfolio enumerate_feasible(const IlpModel& model, std::size_t max_count, double time_limit = 0) {
  detail::Search search(model, time_limit);
  std::vector<Assignment> found;
  SolutionPortfolio portfolio;
  portfolio.exhaustive = search.enumerate(max_count, found);
  for (auto& x : found) portfolio.solutions.push_back(make_solution(model, std::move(x)));
  sort_portfolio(portfolio.solutions);
  return portfolio;
}

inline constexpr std::size_t kBruteForceMaxVars = 24;

/// All 2^n assignments in Gray-code order with incremental row sums.
inline SolutionPortfolio brute_force(const IlpModel& model) {
  const std::size_t n = model.num_vars;
  if (n > kBruteForceMaxVars)
    throw std::invalid_argument("brute_force supports at most " + std::to_string(kBruteForceMaxVars) +
                                " variables, model has " + std::to_string(n));
  const std::size_t m = model.constraints.size();
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> var_rows(n);
  std::vector<std::int64_t> lo(m), hi(m), act(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    lo[r] = model.constraints[r].lower();
    hi[r] = model.constraints[r].upper();
    for (const Term& t : model.constraints[r].coeffs) var_rows[t.var].push_back({r, t.coef});
  }
  std::size_t violated = 0;
  for (std::size_t r = 0; r < m; ++r)
    if (act[r] < lo[r] || act[r] > hi[r]) ++violated;

  SolutionPortfolio portfolio;
  portfolio.exhaustive = true;
  Assignment x(n, 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 0; step < total; ++step) {
    if (step > 0) {
      auto j = static_cast<std::size_t>(std::countr_zero(step));
      x[j] ^= 1;
      std::int64_t sign = x[j] ? 1 : -1;
      for (auto [r, a] : var_rows[j]) {
        bool was_ok = lo[r] <= act[r] && act[r] <= hi[r];
        act[r] += sign * a;
        bool ok = lo[r] <= act[r] && act[r] <= hi[r];
        if (was_ok && !ok) ++violated;
        if (!was_ok && ok) --violated;
      }
    }
    if (violated == 0) portfolio.solutions.push_back(make_solution(model, x));
  }
  sort_portfolio(portfolio.solutions);
  return portfolio;
}

}  // namespace rollstock
