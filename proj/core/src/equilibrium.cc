// Copyright 2026 The Proplab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "proplab/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace proplab {
namespace {

constexpr double kBudgetSlack = 1e-12;

// Expected utility of one agent's bid against a fixed price distribution,
// with a reusable allocation buffer and an evaluation counter.
class Objective {
 public:
  Objective(const Mechanism& mechanism, int agent, const Valuation& valuation,
            const PriceDistribution& prices)
      : mechanism_(mechanism),
        agent_(agent),
        valuation_(valuation),
        prices_(prices),
        scratch_(mechanism.allocation_dim()) {}

  double operator()(std::span<const double> bid) {
    ++evaluations_;
    double value = 0.0;
    for (const auto& s : prices_) {
      mechanism_.Share(agent_, bid, s.totals, scratch_);
      value += s.weight * valuation_.EvalUnchecked(scratch_);
    }
    return value - Payment(bid);
  }

  std::uint64_t evaluations() const { return evaluations_; }

 private:
  const Mechanism& mechanism_;
  int agent_;
  const Valuation& valuation_;
  const PriceDistribution& prices_;
  std::vector<double> scratch_;
  std::uint64_t evaluations_ = 0;
};

struct Incumbent {
  BidVector bid;
  double utility = -std::numeric_limits<double>::infinity();

  // Replaces only on an improvement above rounding noise, so earlier
  // candidates (the start point first) win ties.
  bool Offer(std::span<const double> b, double u) {
    if (!bid.empty() &&
        !(u > utility + 1e-14 * std::max(1.0, std::abs(utility)))) {
      return false;
    }
    if (!(u > utility)) return false;
    bid.assign(b.begin(), b.end());
    utility = u;
    return true;
  }
};

std::vector<double> AxisPoints(double lower, double upper, double step) {
  std::vector<double> out;
  if (upper < lower) return out;
  const double span = upper - lower;
  const auto count = static_cast<std::int64_t>(std::floor(span / step + 1e-9));
  out.reserve(count + 2);
  for (std::int64_t k = 0; k <= count; ++k) out.push_back(lower + k * step);
  if (out.back() < upper - 1e-12 * std::max(1.0, upper)) out.push_back(upper);
  return out;
}

// Coarse-to-fine maximization of f over [lower, upper]: the full grid, then
// `rounds` re-grids of [best - h, best + h] at step h / factor.
template <typename F>
std::pair<double, double> Search1D(F&& f, double lower, double upper,
                                   double step, int rounds, int factor,
                                   double start, double start_value) {
  double best = start;
  double best_value = start_value;
  for (double x : AxisPoints(lower, upper, step)) {
    const double u = f(x);
    if (u > best_value) {
      best = x;
      best_value = u;
    }
  }
  double h = step;
  for (int r = 0; r < rounds; ++r) {
    const double lo = std::max(lower, best - h);
    const double hi = std::min(upper, best + h);
    h /= factor;
    for (double x : AxisPoints(lo, hi, h)) {
      const double u = f(x);
      if (u > best_value) {
        best = x;
        best_value = u;
      }
    }
  }
  return {best, best_value};
}

// Exact maximizer of f(b / (b + p)) - b for a concave piecewise-linear f:
// on each linear piece the optimum is sqrt(s p) - p clamped to the piece.
std::vector<double> ConcaveCandidates(const ConcaveCurve& curve, double p,
                                      double cap, double smallest_positive) {
  std::vector<double> out = {0.0};
  if (p <= 0.0) {
    out.push_back(std::min(smallest_positive, cap));
    return out;
  }
  const auto& xs = curve.xs();
  auto bid_for = [p](double x) {
    return x >= 1.0 ? std::numeric_limits<double>::infinity()
                    : p * x / (1.0 - x);
  };
  for (int k = 0; k < curve.num_segments(); ++k) {
    const double lo = bid_for(xs[k]);
    const double hi = bid_for(xs[k + 1]);
    const double interior = std::sqrt(curve.slope(k) * p) - p;
    out.push_back(std::min(std::clamp(interior, lo, std::max(lo, hi)), cap));
    if (std::isfinite(hi)) out.push_back(std::min(hi, cap));
  }
  out.push_back(cap < std::numeric_limits<double>::infinity() ? cap : 0.0);
  return out;
}

double SmallestPositive(const GridAxis& axis) {
  return axis.lower > 0.0 ? axis.lower : axis.step;
}

class Searcher {
 public:
  Searcher(const Mechanism& mechanism, int agent, const Valuation& valuation,
           double budget, const PriceDistribution& prices,
           const SearchConfig& config)
      : mechanism_(mechanism),
        agent_(agent),
        valuation_(valuation),
        budget_(budget),
        prices_(prices),
        config_(config),
        columns_(mechanism.num_columns()),
        objective_(mechanism, agent, valuation, prices) {}

  BestResponseResult Run(const std::optional<BidVector>& start) {
    double floor = 0.0;
    for (int j = 0; j < columns_; ++j) floor += config_.AxisFor(j).lower;
    if (floor > budget_ + kBudgetSlack) {
      throw std::invalid_argument(
          "budget constraint violated by the entire grid");
    }
    if (start) {
      if (static_cast<int>(start->size()) != columns_) {
        throw std::invalid_argument("start bid has the wrong dimension");
      }
      if (Feasible(*start)) Offer(*start);
    }
    Offer(BidVector(columns_, 0.0));
    for (const auto& c : config_.candidates) {
      if (static_cast<int>(c.size()) != columns_) {
        throw std::invalid_argument("candidate has the wrong dimension");
      }
      for (double b : c) {
        if (!(b >= 0.0) || !std::isfinite(b)) {
          throw std::invalid_argument("candidate bids must be finite, >= 0");
        }
      }
      if (Feasible(c)) Offer(c);
    }
    std::string method = "candidates";
    if (!config_.only_candidates) method = Search();
    return {best_.bid, best_.utility, objective_.evaluations(), method};
  }

 private:
  bool Feasible(std::span<const double> bid) const {
    return Payment(bid) <= budget_ + kBudgetSlack;
  }

  void Offer(std::span<const double> bid) {
    best_.Offer(bid, objective_(bid));
  }

  std::string Search() {
    const bool single = prices_.size() == 1;
    if (config_.mode == SearchMode::kAuto) {
      if (mechanism_.polyhedral() && single) {
        Polyhedral();
        return "polyhedral-equalized";
      }
      if (!mechanism_.polyhedral() && single &&
          (columns_ == 1 || !std::isfinite(budget_))) {
        if (auto curves = valuation_.SeparableConcaveForm()) {
          AnalyticConcave(*curves);
          return "analytic-concave";
        }
      }
      if (!mechanism_.polyhedral() && valuation_.IsAdditive() &&
          !std::isfinite(budget_)) {
        Decomposed();
        return "decomposed";
      }
    }
    if (config_.mode != SearchMode::kCoordinate && JointSize() <=
        config_.max_joint_points) {
      Joint();
      return "joint";
    }
    Coordinate(best_.bid, config_.max_sweeps);
    return "coordinate";
  }

  std::uint64_t JointSize() const {
    std::uint64_t total = 1;
    for (int j = 0; j < columns_; ++j) {
      const auto& a = config_.AxisFor(j);
      const auto k = static_cast<std::uint64_t>(
          std::floor((a.upper - a.lower) / a.step + 1e-9) + 2);
      if (total > config_.max_joint_points / k + 1) {
        return config_.max_joint_points + 1;
      }
      total *= k;
    }
    return total;
  }

  // Product grid; then a local product refinement when small enough, else
  // coordinate refinement around the incumbent.
  void Joint() {
    std::vector<std::vector<double>> grids(columns_);
    std::vector<double> steps(columns_);
    for (int j = 0; j < columns_; ++j) {
      const auto& a = config_.AxisFor(j);
      grids[j] = a.Points();
      steps[j] = a.step;
    }
    ProductSearch(grids);
    const auto window = static_cast<double>(2 * config_.refinement_factor + 1);
    const bool local_product =
        std::pow(window, columns_) <=
        static_cast<double>(config_.max_joint_points);
    for (int r = 0; r < config_.refinement_rounds; ++r) {
      if (!local_product) {
        // One coordinate pass per remaining round at the refined steps.
        Coordinate(best_.bid, 1, r);
        continue;
      }
      for (int j = 0; j < columns_; ++j) {
        const auto& a = config_.AxisFor(j);
        const double h = steps[j];
        steps[j] = h / config_.refinement_factor;
        grids[j] = AxisPoints(std::max(a.lower, best_.bid[j] - h),
                              std::min(a.upper, best_.bid[j] + h), steps[j]);
      }
      ProductSearch(grids);
    }
  }

  void ProductSearch(const std::vector<std::vector<double>>& grids) {
    std::vector<std::size_t> index(columns_, 0);
    BidVector bid(columns_);
    for (const auto& g : grids) {
      if (g.empty()) return;
    }
    while (true) {
      for (int j = 0; j < columns_; ++j) bid[j] = grids[j][index[j]];
      if (Feasible(bid)) Offer(bid);
      int j = columns_ - 1;
      while (j >= 0 && ++index[j] == grids[j].size()) {
        index[j] = 0;
        --j;
      }
      if (j < 0) break;
    }
  }

  // Coordinate ascent from `x`. With `refined_round` >= 0 each coordinate is
  // only searched locally at that round's step.
  void Coordinate(BidVector x, int sweeps, int refined_round = -1) {
    double current = objective_(x);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      bool improved = false;
      for (int j = 0; j < columns_; ++j) {
        const auto& a = config_.AxisFor(j);
        const double rest = Payment(x) - x[j];
        const double upper = std::min(a.upper, budget_ - rest);
        if (upper < a.lower) continue;
        const double keep = x[j];
        auto f = [&](double t) {
          x[j] = t;
          return objective_(x);
        };
        std::pair<double, double> found;
        if (refined_round < 0) {
          found = Search1D(f, a.lower, upper, a.step,
                           config_.refinement_rounds,
                           config_.refinement_factor, keep, current);
        } else {
          double h = a.step;
          for (int r = 0; r < refined_round; ++r) h /= config_.refinement_factor;
          found = Search1D(f, std::max(a.lower, keep - h),
                           std::min(upper, keep + h),
                           h / config_.refinement_factor, 0,
                           config_.refinement_factor, keep, current);
        }
        x[j] = found.first;
        if (found.second > current) {
          current = found.second;
          improved = true;
        } else {
          x[j] = keep;
        }
      }
      best_.Offer(x, current);
      if (!improved) break;
    }
  }

  // Additive valuations: each column is an independent 1-D problem.
  void Decomposed() {
    BidVector x(columns_, 0.0);
    for (int j = 0; j < columns_; ++j) {
      const auto& a = config_.AxisFor(j);
      auto f = [&](double t) {
        x[j] = t;
        const double u = objective_(x);
        x[j] = 0.0;
        return u;
      };
      const double base = f(0.0);
      x[j] = Search1D(f, a.lower, a.upper, a.step, config_.refinement_rounds,
                      config_.refinement_factor, 0.0, base)
                 .first;
    }
    Offer(x);
  }

  void AnalyticConcave(const std::vector<ConcaveCurve>& curves) {
    const auto& totals = prices_.front().totals;
    BidVector x(columns_, 0.0);
    // Columns are independent, so each is settled with the others fixed.
    for (int j = 0; j < columns_; ++j) {
      const auto& a = config_.AxisFor(j);
      const double cap = std::min(budget_, a.upper);
      double best = 0.0;
      double best_value = -std::numeric_limits<double>::infinity();
      for (double b : ConcaveCandidates(curves[j], totals[j], cap,
                                        SmallestPositive(a))) {
        if (b < a.lower) continue;
        x[j] = b;
        const double u = objective_(x);
        if (u > best_value) {
          best = b;
          best_value = u;
        }
      }
      x[j] = best;
    }
    Offer(x);
  }

  // Undominated polyhedral bids equalize every used row at the target share
  // s: b_j = a_j s p_j / (1 - a_j s). The search runs over s.
  void Polyhedral() {
    const Matrix& a = mechanism_.constraints();
    const auto& totals = prices_.front().totals;
    double s_max = 1.0;
    bool open = false;
    for (int j = 0; j < columns_; ++j) {
      const double aj = a(j, agent_);
      if (aj <= 0.0) continue;
      if (1.0 / aj < s_max) {
        s_max = 1.0 / aj;
        open = totals[j] > 0.0;
      } else if (1.0 / aj == s_max && totals[j] > 0.0) {
        open = true;
      }
    }
    // Reaching 1/a_j on a contested row costs an unbounded bid.
    if (open) s_max *= 1.0 - 1e-9;
    double tiny = std::numeric_limits<double>::infinity();
    for (int j = 0; j < columns_; ++j) {
      tiny = std::min(tiny, SmallestPositive(config_.AxisFor(j)));
    }
    BidVector bid(columns_, 0.0);
    auto f = [&](double s) {
      for (int j = 0; j < columns_; ++j) {
        const double aj = a(j, agent_);
        if (aj <= 0.0 || s <= 0.0) {
          bid[j] = 0.0;
        } else if (totals[j] > 0.0) {
          bid[j] = aj * s * totals[j] / (1.0 - aj * s);
        } else {
          bid[j] = tiny;
        }
      }
      if (!Feasible(bid)) return -std::numeric_limits<double>::infinity();
      const double u = objective_(bid);
      best_.Offer(bid, u);
      return u;
    };
    const auto [s_best, u_best] =
        Search1D(f, 0.0, s_max, config_.allocation_step,
                 config_.refinement_rounds, config_.refinement_factor, 0.0,
                 -std::numeric_limits<double>::infinity());
    double h = config_.allocation_step;
    for (int r = 0; r < config_.refinement_rounds; ++r) {
      h /= config_.refinement_factor;
    }
    GoldenPolish(f, std::max(0.0, s_best - h), std::min(s_max, s_best + h));
  }

  // Golden-section steps on a bracket; f records every improvement itself.
  template <typename F>
  static void GoldenPolish(F& f, double lo, double hi) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double fa = f(a), fb = f(b);
    for (int k = 0; k < 60 && hi - lo > 1e-15; ++k) {
      if (fa < fb) {
        lo = a;
        a = b;
        fa = fb;
        b = lo + ratio * (hi - lo);
        fb = f(b);
      } else {
        hi = b;
        b = a;
        fb = fa;
        a = hi - ratio * (hi - lo);
        fa = f(a);
      }
    }
  }

  const Mechanism& mechanism_;
  int agent_;
  const Valuation& valuation_;
  double budget_;
  const PriceDistribution& prices_;
  const SearchConfig& config_;
  int columns_;
  Objective objective_;
  Incumbent best_;
};

const SearchConfig& ConfigFor(const std::vector<SearchConfig>& configs,
                              int agent) {
  if (configs.empty()) throw std::invalid_argument("no search config");
  if (configs.size() == 1) return configs.front();
  if (agent >= static_cast<int>(configs.size())) {
    throw std::invalid_argument("one search config per agent");
  }
  return configs[agent];
}

std::string DescribeGrids(const std::vector<SearchConfig>& configs) {
  std::string out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (i > 0) out += "; ";
    out += configs[i].ToString();
  }
  return out;
}

void Summarize(EquilibriumReport& report) {
  report.eps = 0.0;
  report.ci_halfwidth = 0.0;
  for (const auto& d : report.deviations) {
    if (d.eps > report.eps ||
        (d.eps == report.eps && d.ci_halfwidth > report.ci_halfwidth)) {
      report.eps = d.eps;
      report.ci_halfwidth = d.ci_halfwidth;
    }
  }
  report.verdict = report.eps <= report.tolerance;
}

void CheckDamping(const BrDynamicsOptions& options) {
  if (!(options.damping >= 0.0 && options.damping < 1.0)) {
    throw std::invalid_argument("BrDynamics: damping must be in [0, 1)");
  }
}

BidVector Damped(const BidVector& response, std::span<const double> old,
                 double damping) {
  if (damping == 0.0) return response;
  BidVector out(response.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = damping * old[j] + (1.0 - damping) * response[j];
  }
  return out;
}

double MaxChange(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    out = std::max(out, std::abs(a[j] - b[j]));
  }
  return out;
}

}  // namespace

std::vector<double> GridAxis::Points() const {
  if (!(step > 0.0) || !(upper >= lower) || !(lower >= 0.0)) {
    throw std::invalid_argument("GridAxis needs step > 0, upper >= lower >= 0");
  }
  return AxisPoints(lower, upper, step);
}

std::string GridAxis::ToString() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "[%.6g,%.6g]/%.3g", lower, upper, step);
  return buf;
}

const GridAxis& SearchConfig::AxisFor(int column) const {
  if (axes.size() == 1) return axes.front();
  return axes.at(column);
}

void SearchConfig::Validate(int columns) const {
  if (axes.empty() ||
      (axes.size() != 1 && static_cast<int>(axes.size()) != columns)) {
    throw std::invalid_argument("SearchConfig: one axis, or one per column");
  }
  for (const auto& a : axes) {
    if (!(a.step > 0.0) || !(a.upper >= a.lower) || !(a.lower >= 0.0)) {
      throw std::invalid_argument(
          "SearchConfig: step > 0 and upper >= lower >= 0");
    }
  }
  if (!(lambda >= 1.0)) throw std::invalid_argument("SearchConfig: lambda >= 1");
  if (refinement_rounds < 0 || refinement_factor < 2 || max_sweeps < 1) {
    throw std::invalid_argument("SearchConfig: invalid refinement settings");
  }
  if (!(allocation_step > 0.0)) {
    throw std::invalid_argument("SearchConfig: allocation_step > 0");
  }
}

std::string SearchConfig::ToString() const {
  std::ostringstream out;
  out << "axes=";
  if (axes.size() == 1) {
    out << axes.front().ToString();
  } else {
    out << axes.size() << "x" << axes.front().ToString();
  }
  out << " refine=" << refinement_rounds << "x" << refinement_factor;
  if (!candidates.empty()) out << " candidates=" << candidates.size();
  if (only_candidates) out << " only-candidates";
  const char* modes[] = {"auto", "joint", "coordinate"};
  out << " mode=" << modes[static_cast<int>(mode)];
  return out.str();
}

double BestResponseLinear(double slope, double price) {
  if (!(slope >= 0.0) || !(price >= 0.0)) {
    throw std::invalid_argument("BestResponseLinear: needs slope, price >= 0");
  }
  if (price == 0.0) return 0.0;
  return std::max(0.0, std::sqrt(slope * price) - price);
}

BestResponseResult BestResponse(const Mechanism& mechanism, int agent,
                                const Valuation& valuation, double budget,
                                const PriceDistribution& prices,
                                const SearchConfig& config,
                                const std::optional<BidVector>& start) {
  if (agent < 0 || agent >= mechanism.num_agents()) {
    throw std::invalid_argument("BestResponse: agent out of range");
  }
  if (valuation.dim() != mechanism.allocation_dim()) {
    throw std::invalid_argument("BestResponse: valuation dimension");
  }
  if (prices.empty()) throw std::invalid_argument("BestResponse: no prices");
  for (const auto& s : prices) {
    if (static_cast<int>(s.totals.size()) != mechanism.num_columns()) {
      throw std::invalid_argument("BestResponse: price dimension");
    }
  }
  if (!(budget >= 0.0)) throw std::invalid_argument("BestResponse: budget");
  config.Validate(mechanism.num_columns());
  return Searcher(mechanism, agent, valuation, budget, prices, config)
      .Run(start);
}

BestResponseResult BestResponse(const Instance& instance, int agent,
                                const BidProfile& bids,
                                const SearchConfig& config) {
  instance.mechanism().CheckProfile(bids);
  const auto row = bids.row(agent);
  return BestResponse(instance.mechanism(), agent, instance.valuation(agent),
                      instance.budget(agent), PricesFromProfile(bids, agent),
                      config, BidVector(row.begin(), row.end()));
}

double EquilibriumReport::AgentEps(int agent) const {
  double out = 0.0;
  for (const auto& d : deviations) {
    if (d.agent == agent) out = std::max(out, d.eps);
  }
  return out;
}

EquilibriumReport VerifyPureNe(const Instance& instance,
                               const BidProfile& bids,
                               const std::vector<SearchConfig>& configs,
                               double tolerance) {
  instance.mechanism().CheckProfile(bids);
  EquilibriumReport report;
  report.kind = "pure";
  report.grid = DescribeGrids(configs);
  report.tolerance = tolerance;
  for (int i = 0; i < instance.num_agents(); ++i) {
    const double u = Utility(instance, i, bids);
    const auto br = BestResponse(instance, i, bids, ConfigFor(configs, i));
    AgentDeviation d;
    d.agent = i;
    d.equilibrium_utility = u;
    d.deviation_utility = br.utility;
    d.eps = std::max(0.0, br.utility - u);
    d.best_deviation = br.bid;
    report.deviations.push_back(std::move(d));
  }
  Summarize(report);
  return report;
}

EquilibriumReport VerifyMixedNe(const Instance& instance,
                                const MixedProfile& profile,
                                std::uint64_t samples,
                                const std::vector<SearchConfig>& configs,
                                std::uint64_t seed, double tolerance) {
  if (samples < 100) {
    throw std::invalid_argument("VerifyMixedNe: needs at least 100 samples");
  }
  const Mechanism& mech = instance.mechanism();
  if (static_cast<int>(profile.size()) != instance.num_agents()) {
    throw std::invalid_argument("VerifyMixedNe: one distribution per agent");
  }
  EquilibriumReport report;
  report.kind = "mixed";
  report.grid = DescribeGrids(configs);
  report.samples = samples;
  report.tolerance = tolerance;
  const double weight = 1.0 / static_cast<double>(samples);
  std::vector<double> scratch(mech.allocation_dim());
  for (int i = 0; i < instance.num_agents(); ++i) {
    // Every agent replays the same draws.
    Rng rng(seed);
    PriceDistribution prices(samples);
    std::vector<double> eq(samples);
    for (std::uint64_t s = 0; s < samples; ++s) {
      const BidProfile draw = SampleProfile(profile, rng);
      prices[s] = {OpponentTotals(draw, i), weight};
      eq[s] = UtilityAgainst(mech, i, instance.valuation(i), draw.row(i),
                             prices[s].totals, scratch);
    }
    const auto br = BestResponse(mech, i, instance.valuation(i),
                                 instance.budget(i), prices,
                                 ConfigFor(configs, i));
    double mean = 0.0, mean_eq = 0.0, sum_sq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const double diff = UtilityAgainst(mech, i, instance.valuation(i), br.bid,
                                         prices[s].totals, scratch) -
                          eq[s];
      mean += diff;
      sum_sq += diff * diff;
      mean_eq += eq[s];
    }
    mean /= samples;
    mean_eq /= samples;
    const double var = std::max(
        0.0, (sum_sq - samples * mean * mean) / static_cast<double>(samples - 1));
    AgentDeviation d;
    d.agent = i;
    d.equilibrium_utility = mean_eq;
    d.deviation_utility = mean_eq + mean;
    d.eps = std::max(0.0, mean);
    d.ci_halfwidth = 1.96 * std::sqrt(var / samples);
    d.best_deviation = br.bid;
    report.deviations.push_back(std::move(d));
  }
  Summarize(report);
  return report;
}

PriceDistribution BayesianPrices(const BayesianGame& game,
                                 const StrategyMap& strategy, int agent,
                                 std::uint64_t max_scenarios) {
  ValidateStrategy(game, strategy);
  const int n = game.num_agents();
  const int m = game.mechanism().num_columns();
  std::vector<std::vector<WeightedBid>> marginals;
  std::uint64_t total = 1;
  for (int k = 0; k < n; ++k) {
    if (k == agent) continue;
    marginals.push_back(MarginalBids(game, strategy, k));
    total *= marginals.back().size();
    if (total > max_scenarios) {
      throw std::length_error("BayesianPrices: enumeration too large");
    }
  }
  PriceDistribution out;
  if (marginals.empty()) {
    out.push_back({std::vector<double>(m, 0.0), 1.0});
    return out;
  }
  out.reserve(total);
  std::vector<std::size_t> index(marginals.size(), 0);
  while (true) {
    PriceScenario s{std::vector<double>(m, 0.0), 1.0};
    for (std::size_t k = 0; k < marginals.size(); ++k) {
      const WeightedBid& w = marginals[k][index[k]];
      for (int j = 0; j < m; ++j) s.totals[j] += w.bid[j];
      s.weight *= w.probability;
    }
    out.push_back(std::move(s));
    int k = static_cast<int>(marginals.size()) - 1;
    while (k >= 0 && ++index[k] == marginals[k].size()) {
      index[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

namespace {

PriceDistribution SampledBayesianPrices(const BayesianGame& game,
                                        const StrategyMap& strategy, int agent,
                                        const MonteCarloOptions& mc) {
  const int n = game.num_agents();
  const int m = game.mechanism().num_columns();
  std::vector<std::discrete_distribution<int>> type_draw;
  for (int k = 0; k < n; ++k) {
    std::vector<double> w;
    for (const auto& t : game.types()[k]) w.push_back(t.probability);
    type_draw.emplace_back(w.begin(), w.end());
  }
  Rng rng(mc.seed);
  PriceDistribution out(mc.samples);
  for (auto& s : out) {
    s.totals.assign(m, 0.0);
    s.weight = 1.0 / static_cast<double>(mc.samples);
    for (int k = 0; k < n; ++k) {
      const int t = type_draw[k](rng);
      const BidVector b = strategy[k][t].Sample(rng);
      if (k == agent) continue;
      for (int j = 0; j < m; ++j) s.totals[j] += b[j];
    }
  }
  return out;
}

}  // namespace

EquilibriumReport VerifyBayesianNe(
    const BayesianGame& game, const StrategyMap& strategy,
    const std::vector<SearchConfig>& configs, double tolerance,
    const std::optional<MonteCarloOptions>& monte_carlo) {
  ValidateStrategy(game, strategy);
  if (monte_carlo && monte_carlo->samples < 100) {
    throw std::invalid_argument("VerifyBayesianNe: needs >= 100 samples");
  }
  const Mechanism& mech = game.mechanism();
  EquilibriumReport report;
  report.kind = "bayesian";
  report.grid = DescribeGrids(configs);
  report.tolerance = tolerance;
  if (monte_carlo) report.samples = monte_carlo->samples;
  for (int i = 0; i < game.num_agents(); ++i) {
    const PriceDistribution prices =
        monte_carlo ? SampledBayesianPrices(game, strategy, i, *monte_carlo)
                    : BayesianPrices(game, strategy, i);
    for (int t = 0; t < game.num_types(i); ++t) {
      const AgentType& type = game.type(i, t);
      const BidDistribution& own = strategy[i][t];
      double eq = 0.0;
      std::optional<BidVector> start;
      if (own.is_finite()) {
        for (const auto& w : own.support()) {
          eq += w.probability *
                ExpectedUtility(mech, i, type.valuation, w.bid, prices);
        }
        if (own.support().size() == 1) start = own.support().front().bid;
      } else {
        if (!monte_carlo) {
          throw std::invalid_argument(
              "VerifyBayesianNe: sampled strategies need Monte Carlo");
        }
        Rng rng(monte_carlo->seed ^ (0x9e3779b97f4a7c15ULL * (i + 1) + t));
        for (std::uint64_t s = 0; s < monte_carlo->samples; ++s) {
          eq += ExpectedUtility(mech, i, type.valuation, own.Sample(rng),
                                prices);
        }
        eq /= monte_carlo->samples;
      }
      const auto br = BestResponse(mech, i, type.valuation, type.budget,
                                   prices, ConfigFor(configs, i), start);
      AgentDeviation d;
      d.agent = i;
      d.type = t;
      d.equilibrium_utility = eq;
      d.deviation_utility = br.utility;
      d.eps = std::max(0.0, br.utility - eq);
      d.best_deviation = br.bid;
      report.deviations.push_back(std::move(d));
    }
  }
  Summarize(report);
  return report;
}

BrDynamicsResult BrDynamics(const Instance& instance, const BidProfile& start,
                            const std::vector<SearchConfig>& configs,
                            const BrDynamicsOptions& options) {
  instance.mechanism().CheckProfile(start);
  CheckDamping(options);
  BrDynamicsResult result;
  result.profile = start;
  for (int round = 0; round < options.max_rounds; ++round) {
    double change = 0.0;
    for (int i = 0; i < instance.num_agents(); ++i) {
      const auto br =
          BestResponse(instance, i, result.profile, ConfigFor(configs, i));
      const BidVector next =
          Damped(br.bid, result.profile.row(i), options.damping);
      change = std::max(change, MaxChange(next, result.profile.row(i)));
      result.profile.SetRow(i, next);
    }
    result.trace.push_back(result.profile);
    result.rounds = round + 1;
    result.residual = change;
    if (change < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

StrategyMap BayesianBrResult::Strategy() const {
  StrategyMap out(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    for (const auto& b : bids[i]) out[i].push_back(BidDistribution::PointMass(b));
  }
  return out;
}

BayesianBrResult BayesianBrDynamics(const BayesianGame& game,
                                    std::vector<std::vector<BidVector>> start,
                                    const std::vector<SearchConfig>& configs,
                                    const BrDynamicsOptions& options) {
  CheckDamping(options);
  BayesianBrResult result;
  result.bids = std::move(start);
  ValidateStrategy(game, result.Strategy());
  for (int round = 0; round < options.max_rounds; ++round) {
    double change = 0.0;
    for (int i = 0; i < game.num_agents(); ++i) {
      const PriceDistribution prices =
          BayesianPrices(game, result.Strategy(), i);
      for (int t = 0; t < game.num_types(i); ++t) {
        const AgentType& type = game.type(i, t);
        const auto br =
            BestResponse(game.mechanism(), i, type.valuation, type.budget,
                         prices, ConfigFor(configs, i), result.bids[i][t]);
        BidVector next = Damped(br.bid, result.bids[i][t], options.damping);
        change = std::max(change, MaxChange(next, result.bids[i][t]));
        result.bids[i][t] = std::move(next);
      }
    }
    result.rounds = round + 1;
    result.residual = change;
    if (change < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace proplab
