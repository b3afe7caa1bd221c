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

#include "proplab/valuation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <variant>

namespace proplab {
namespace {

constexpr double kDomainSlack = 1e-12;

void Require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

// -- ConcaveCurve -------------------------------------------------------------

ConcaveCurve::ConcaveCurve(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  Require(xs_.size() >= 2 && xs_.size() == ys_.size(),
          "ConcaveCurve: need at least two matching breakpoints");
  Require(xs_.front() == 0.0 && xs_.back() == 1.0,
          "ConcaveCurve: breakpoints must span [0, 1]");
  Require(ys_.front() == 0.0, "ConcaveCurve: f(0) must be 0");
  double previous_slope = INFINITY;
  for (int k = 0; k + 1 < static_cast<int>(xs_.size()); ++k) {
    Require(xs_[k + 1] > xs_[k], "ConcaveCurve: breakpoints must increase");
    Require(std::isfinite(ys_[k + 1]), "ConcaveCurve: non-finite value");
    const double s = slope(k);
    Require(s >= 0.0, "ConcaveCurve: negative slope");
    Require(s <= previous_slope + 1e-12 * std::max(1.0, previous_slope),
            "ConcaveCurve: slopes must be nonincreasing");
    previous_slope = s;
  }
}

ConcaveCurve ConcaveCurve::Linear(double slope) {
  return ConcaveCurve({0.0, 1.0}, {0.0, slope});
}

ConcaveCurve ConcaveCurve::FromSegments(const std::vector<double>& lengths,
                                        const std::vector<double>& slopes) {
  Require(!lengths.empty() && lengths.size() == slopes.size(),
          "ConcaveCurve: lengths and slopes must match");
  std::vector<double> xs{0.0};
  std::vector<double> ys{0.0};
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    xs.push_back(xs.back() + lengths[k]);
    ys.push_back(ys.back() + lengths[k] * slopes[k]);
  }
  Require(std::abs(xs.back() - 1.0) < 1e-9,
          "ConcaveCurve: segment lengths must sum to 1");
  xs.back() = 1.0;
  return ConcaveCurve(std::move(xs), std::move(ys));
}

double ConcaveCurve::slope(int k) const {
  return (ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]);
}

double ConcaveCurve::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return ys_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const int k = static_cast<int>(it - xs_.begin()) - 1;
  return ys_[k] + (x - xs_[k]) * slope(k);
}

ConcaveCurve ConcaveCurve::Capped(double cap) const {
  Require(cap >= 0.0, "ConcaveCurve: negative cap");
  if (cap >= ys_.back()) return *this;
  std::vector<double> xs{0.0};
  std::vector<double> ys{0.0};
  for (int k = 0; k < num_segments(); ++k) {
    if (ys_[k + 1] < cap) {
      xs.push_back(xs_[k + 1]);
      ys.push_back(ys_[k + 1]);
      continue;
    }
    const double s = slope(k);
    const double x_hit = s > 0.0 ? xs_[k] + (cap - ys_[k]) / s : xs_[k];
    if (x_hit > xs.back() && x_hit < 1.0) {
      xs.push_back(x_hit);
      ys.push_back(cap);
    }
    break;
  }
  if (xs.back() < 1.0) {
    xs.push_back(1.0);
    ys.push_back(cap);
  } else {
    ys.back() = std::min(ys.back(), cap);
  }
  return ConcaveCurve(std::move(xs), std::move(ys));
}

// -- Valuation representation -------------------------------------------------

namespace {

struct LinearRep {
  std::vector<double> weights;
};
struct AdditiveConcaveRep {
  std::vector<ConcaveCurve> curves;
};
struct MinCoordinateRep {
  int dim;
  double scale;
};
struct ScaledCoordinateRep {
  int dim;
  int resource;
  double scale;
};
struct ThresholdLowRep {
  int dim;
  double threshold;
  double value;
};
struct ThresholdHighRep {
  int dim;
  double threshold;
  double value;
};
struct PolyJumpRep {
  double eps;
};
struct GeometricMeanRep {};
struct TruncatedRep {
  Valuation inner;
  double cap;
};
struct CustomRep {
  std::string name;
  int dim;
  Valuation::Fn fn;
};

}  // namespace

struct Valuation::Rep {
  std::variant<LinearRep, AdditiveConcaveRep, MinCoordinateRep,
               ScaledCoordinateRep, ThresholdLowRep, ThresholdHighRep,
               PolyJumpRep, GeometricMeanRep, TruncatedRep, CustomRep>
      body;
};

Valuation Valuation::Linear(std::vector<double> weights) {
  Require(!weights.empty(), "Linear: empty weights");
  for (double w : weights) {
    Require(std::isfinite(w) && w >= 0.0, "Linear: weights must be >= 0");
  }
  return Valuation(std::make_shared<Rep>(Rep{LinearRep{std::move(weights)}}));
}

Valuation Valuation::AdditiveConcave(std::vector<ConcaveCurve> curves) {
  Require(!curves.empty(), "AdditiveConcave: no curves");
  return Valuation(
      std::make_shared<Rep>(Rep{AdditiveConcaveRep{std::move(curves)}}));
}

Valuation Valuation::MinCoordinate(int dim, double scale) {
  Require(dim >= 1, "MinCoordinate: dim must be >= 1");
  Require(std::isfinite(scale) && scale >= 0.0, "MinCoordinate: scale < 0");
  return Valuation(std::make_shared<Rep>(Rep{MinCoordinateRep{dim, scale}}));
}

Valuation Valuation::ScaledCoordinate(int dim, int resource, double scale) {
  Require(dim >= 1 && resource >= 0 && resource < dim,
          "ScaledCoordinate: resource out of range");
  Require(std::isfinite(scale) && scale >= 0.0, "ScaledCoordinate: scale < 0");
  return Valuation(
      std::make_shared<Rep>(Rep{ScaledCoordinateRep{dim, resource, scale}}));
}

Valuation Valuation::ThresholdLow(int dim, double threshold, double value) {
  Require(dim >= 1, "ThresholdLow: dim must be >= 1");
  Require(threshold > 0.0 && threshold <= 1.0,
          "ThresholdLow: threshold must lie in (0, 1]");
  Require(std::isfinite(value) && value >= 0.0, "ThresholdLow: value < 0");
  return Valuation(
      std::make_shared<Rep>(Rep{ThresholdLowRep{dim, threshold, value}}));
}

Valuation Valuation::ThresholdHigh(int dim, double threshold, double value) {
  Require(dim >= 1, "ThresholdHigh: dim must be >= 1");
  Require(threshold > 0.0 && threshold <= 1.0,
          "ThresholdHigh: threshold must lie in (0, 1]");
  Require(std::isfinite(value) && value >= 0.0, "ThresholdHigh: value < 0");
  return Valuation(
      std::make_shared<Rep>(Rep{ThresholdHighRep{dim, threshold, value}}));
}

Valuation Valuation::PolyJump(double eps) {
  Require(eps >= 0.0 && eps < 1.0, "PolyJump: eps must lie in [0, 1)");
  return Valuation(std::make_shared<Rep>(Rep{PolyJumpRep{eps}}));
}

Valuation Valuation::GeometricMean() {
  return Valuation(std::make_shared<Rep>(Rep{GeometricMeanRep{}}));
}

Valuation Valuation::Custom(std::string name, int dim, Fn fn) {
  Require(dim >= 1 && fn != nullptr, "Custom: need dim >= 1 and a callable");
  return Valuation(std::make_shared<Rep>(
      Rep{CustomRep{std::move(name), dim, std::move(fn)}}));
}

Valuation Truncate(const Valuation& v, double cap) {
  Require(cap >= 0.0 && !std::isnan(cap), "Truncate: cap must be >= 0");
  return Valuation(
      std::make_shared<Valuation::Rep>(Valuation::Rep{TruncatedRep{v, cap}}));
}

// -- Evaluation ---------------------------------------------------------------

namespace {

bool AllZero(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double c) { return c == 0.0; });
}

struct Evaluator {
  std::span<const double> x;

  double operator()(const LinearRep& r) const {
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) total += r.weights[j] * x[j];
    return total;
  }
  double operator()(const AdditiveConcaveRep& r) const {
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) total += r.curves[j](x[j]);
    return total;
  }
  double operator()(const MinCoordinateRep& r) const {
    return r.scale * *std::min_element(x.begin(), x.end());
  }
  double operator()(const ScaledCoordinateRep& r) const {
    return r.scale * x[r.resource];
  }
  double operator()(const ThresholdLowRep& r) const {
    if (AllZero(x)) return 0.0;
    const bool reached = std::any_of(
        x.begin(), x.end(), [&](double c) { return c >= r.threshold; });
    return reached ? 2.0 * r.value : r.value;
  }
  double operator()(const ThresholdHighRep& r) const {
    if (AllZero(x)) return 0.0;
    const bool all_reached = std::all_of(
        x.begin(), x.end(), [&](double c) { return c >= r.threshold; });
    return all_reached ? 2.0 * r.value : r.value;
  }
  double operator()(const PolyJumpRep& r) const {
    const double t = x[0];
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 2.0;
    return 1.0 + r.eps * t;
  }
  double operator()(const GeometricMeanRep&) const {
    return std::sqrt(x[0] * x[1]);
  }
  double operator()(const TruncatedRep& r) const {
    return std::min(r.inner.EvalUnchecked(x), r.cap);
  }
  double operator()(const CustomRep& r) const { return r.fn(x); }
};

struct DimOf {
  int operator()(const LinearRep& r) const {
    return static_cast<int>(r.weights.size());
  }
  int operator()(const AdditiveConcaveRep& r) const {
    return static_cast<int>(r.curves.size());
  }
  int operator()(const MinCoordinateRep& r) const { return r.dim; }
  int operator()(const ScaledCoordinateRep& r) const { return r.dim; }
  int operator()(const ThresholdLowRep& r) const { return r.dim; }
  int operator()(const ThresholdHighRep& r) const { return r.dim; }
  int operator()(const PolyJumpRep&) const { return 1; }
  int operator()(const GeometricMeanRep&) const { return 2; }
  int operator()(const TruncatedRep& r) const { return r.inner.dim(); }
  int operator()(const CustomRep& r) const { return r.dim; }
};

template <typename T>
const T& As(const Valuation::Rep& rep, const char* what) {
  const T* p = std::get_if<T>(&rep.body);
  if (p == nullptr) throw std::logic_error(what);
  return *p;
}

}  // namespace

double Valuation::EvalUnchecked(std::span<const double> x) const {
  return std::visit(Evaluator{x}, rep_->body);
}

double Valuation::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("Valuation: dimension mismatch");
  }
  for (double c : x) {
    if (!(c >= 0.0 && c <= 1.0 + kDomainSlack)) {
      throw std::invalid_argument("Valuation: coordinate outside [0, 1]");
    }
  }
  return EvalUnchecked(x);
}

int Valuation::dim() const { return std::visit(DimOf{}, rep_->body); }

ValuationFamily Valuation::family() const {
  return static_cast<ValuationFamily>(rep_->body.index());
}

bool Valuation::IsAdditive() const {
  if (dim() == 1) return true;
  switch (family()) {
    case ValuationFamily::kLinear:
    case ValuationFamily::kAdditiveConcave:
    case ValuationFamily::kScaledCoordinate:
      return true;
    default:
      return false;
  }
}

std::optional<std::vector<ConcaveCurve>> Valuation::SeparableConcaveForm()
    const {
  const auto& body = rep_->body;
  if (const auto* r = std::get_if<LinearRep>(&body)) {
    std::vector<ConcaveCurve> out;
    for (double w : r->weights) out.push_back(ConcaveCurve::Linear(w));
    return out;
  }
  if (const auto* r = std::get_if<AdditiveConcaveRep>(&body)) {
    return r->curves;
  }
  if (const auto* r = std::get_if<ScaledCoordinateRep>(&body)) {
    std::vector<ConcaveCurve> out(r->dim, ConcaveCurve::Linear(0.0));
    out[r->resource] = ConcaveCurve::Linear(r->scale);
    return out;
  }
  if (const auto* r = std::get_if<MinCoordinateRep>(&body)) {
    if (r->dim != 1) return std::nullopt;
    return std::vector<ConcaveCurve>{ConcaveCurve::Linear(r->scale)};
  }
  if (const auto* r = std::get_if<TruncatedRep>(&body)) {
    if (r->inner.dim() != 1) return std::nullopt;
    auto inner = r->inner.SeparableConcaveForm();
    if (!inner) return std::nullopt;
    return std::vector<ConcaveCurve>{inner->front().Capped(r->cap)};
  }
  return std::nullopt;
}

std::vector<std::int64_t> Valuation::SymmetryLabels() const {
  const int d = dim();
  std::vector<std::int64_t> labels(d, 0);
  const auto& body = rep_->body;
  if (const auto* r = std::get_if<LinearRep>(&body)) {
    std::map<double, std::int64_t> ids;
    for (int j = 0; j < d; ++j) {
      labels[j] = ids.emplace(r->weights[j], ids.size()).first->second;
    }
  } else if (const auto* r = std::get_if<AdditiveConcaveRep>(&body)) {
    for (int j = 0; j < d; ++j) {
      labels[j] = j;
      for (int k = 0; k < j; ++k) {
        if (r->curves[k] == r->curves[j]) {
          labels[j] = labels[k];
          break;
        }
      }
    }
  } else if (const auto* r = std::get_if<ScaledCoordinateRep>(&body)) {
    labels[r->resource] = 1;
  } else if (const auto* r = std::get_if<TruncatedRep>(&body)) {
    return r->inner.SymmetryLabels();
  } else if (std::holds_alternative<CustomRep>(body)) {
    for (int j = 0; j < d; ++j) labels[j] = j;
  }
  return labels;
}

double Valuation::MaxValue() const {
  std::vector<double> ones(dim(), 1.0);
  return EvalUnchecked(ones);
}

const std::vector<double>& Valuation::weights() const {
  return As<LinearRep>(*rep_, "weights(): not Linear").weights;
}
const std::vector<ConcaveCurve>& Valuation::curves() const {
  return As<AdditiveConcaveRep>(*rep_, "curves(): not AdditiveConcave").curves;
}
double Valuation::scale() const {
  const auto& body = rep_->body;
  if (const auto* r = std::get_if<MinCoordinateRep>(&body)) return r->scale;
  if (const auto* r = std::get_if<ScaledCoordinateRep>(&body)) return r->scale;
  if (const auto* r = std::get_if<ThresholdLowRep>(&body)) return r->value;
  if (const auto* r = std::get_if<ThresholdHighRep>(&body)) return r->value;
  throw std::logic_error("scale(): family has no scale");
}
int Valuation::resource() const {
  return As<ScaledCoordinateRep>(*rep_, "resource(): not ScaledCoordinate")
      .resource;
}
double Valuation::threshold() const {
  const auto& body = rep_->body;
  if (const auto* r = std::get_if<ThresholdLowRep>(&body)) return r->threshold;
  if (const auto* r = std::get_if<ThresholdHighRep>(&body)) {
    return r->threshold;
  }
  throw std::logic_error("threshold(): not a threshold family");
}
double Valuation::eps() const {
  return As<PolyJumpRep>(*rep_, "eps(): not PolyJump").eps;
}
double Valuation::cap() const {
  return As<TruncatedRep>(*rep_, "cap(): not BudgetTruncated").cap;
}
const Valuation& Valuation::inner() const {
  return As<TruncatedRep>(*rep_, "inner(): not BudgetTruncated").inner;
}
const std::string& Valuation::custom_name() const {
  return As<CustomRep>(*rep_, "custom_name(): not Custom").name;
}

std::string_view FamilyName(ValuationFamily family) {
  switch (family) {
    case ValuationFamily::kLinear: return "linear";
    case ValuationFamily::kAdditiveConcave: return "additive_concave";
    case ValuationFamily::kMinCoordinate: return "min_coordinate";
    case ValuationFamily::kScaledCoordinate: return "scaled_coordinate";
    case ValuationFamily::kThresholdLow: return "threshold_low";
    case ValuationFamily::kThresholdHigh: return "threshold_high";
    case ValuationFamily::kPolyJump: return "poly_jump";
    case ValuationFamily::kGeometricMean: return "geometric_mean";
    case ValuationFamily::kBudgetTruncated: return "budget_truncated";
    case ValuationFamily::kCustom: return "custom";
  }
  return "unknown";
}

// -- Property checks ----------------------------------------------------------

namespace {

// Coordinates are drawn continuously half of the time and otherwise from a
// quarter grid, so that threshold boundaries and the box corners get hit.
class PairSampler {
 public:
  explicit PairSampler(std::uint64_t seed) : rng_(seed) {}

  double Below(double upper) {
    if (upper <= 0.0) return 0.0;
    if (coin_(rng_)) return upper * unit_(rng_);
    const int steps = static_cast<int>(std::floor(upper * 4.0 + 1e-12));
    std::uniform_int_distribution<int> pick(0, steps);
    return std::min(upper, pick(rng_) / 4.0);
  }

 private:
  std::mt19937_64 rng_;
  std::bernoulli_distribution coin_{0.5};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

PropertyReport Violation(std::string property, std::vector<double> x,
                         std::vector<double> y, double amount, int samples,
                         double tol) {
  PropertyReport report;
  report.property = std::move(property);
  report.verdict = PropertyVerdict::kViolated;
  report.witness = std::make_pair(std::move(x), std::move(y));
  report.violation = amount;
  report.samples = samples;
  report.tolerance = tol;
  return report;
}

}  // namespace

PropertyReport CheckSubadditive(const Valuation& v, int samples,
                                std::uint64_t seed, double tol) {
  Require(samples >= 1, "CheckSubadditive: need at least one sample");
  const int d = v.dim();
  std::vector<double> x(d), y(d), z(d);
  int used = 0;
  auto test = [&]() -> std::optional<PropertyReport> {
    ++used;
    for (int j = 0; j < d; ++j) z[j] = x[j] + y[j];
    const double gap = v.EvalUnchecked(z) - v.EvalUnchecked(x) -
                       v.EvalUnchecked(y);
    if (gap > tol) return Violation("subadditive", x, y, gap, used, tol);
    return std::nullopt;
  };

  if (d <= 6) {
    const int full = 1 << d;
    for (int sx = 0; sx < full; ++sx) {
      for (int sy = 0; sy < full; ++sy) {
        if ((sx & sy) != 0) continue;
        for (int j = 0; j < d; ++j) {
          x[j] = (sx >> j) & 1;
          y[j] = (sy >> j) & 1;
        }
        if (auto bad = test()) return *bad;
      }
    }
  }
  PairSampler sampler(seed);
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < d; ++j) {
      x[j] = sampler.Below(1.0);
      y[j] = sampler.Below(1.0 - x[j]);
    }
    if (auto bad = test()) return *bad;
  }
  PropertyReport report;
  report.property = "subadditive";
  report.samples = used;
  report.tolerance = tol;
  return report;
}

PropertyReport CheckMonotone(const Valuation& v, int samples,
                             std::uint64_t seed, double tol) {
  Require(samples >= 1, "CheckMonotone: need at least one sample");
  const int d = v.dim();
  std::vector<double> x(d), y(d);
  PairSampler sampler(seed);
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < d; ++j) {
      x[j] = sampler.Below(1.0);
      y[j] = x[j] + sampler.Below(1.0 - x[j]);
    }
    const double drop = v.EvalUnchecked(x) - v.EvalUnchecked(y);
    if (drop > tol) return Violation("monotone", x, y, drop, s + 1, tol);
  }
  PropertyReport report;
  report.property = "monotone";
  report.samples = samples;
  report.tolerance = tol;
  return report;
}

PropertyReport CheckNormalized(const Valuation& v, int samples,
                               std::uint64_t seed, double tol) {
  Require(samples >= 1, "CheckNormalized: need at least one sample");
  const int d = v.dim();
  std::vector<double> zero(d, 0.0);
  const double at_zero = v.EvalUnchecked(zero);
  if (std::abs(at_zero) > tol) {
    return Violation("normalized", zero, zero, std::abs(at_zero), 1, tol);
  }
  std::vector<double> x(d);
  PairSampler sampler(seed);
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < d; ++j) x[j] = sampler.Below(1.0);
    const double value = v.EvalUnchecked(x);
    if (value < -tol || !std::isfinite(value)) {
      return Violation("normalized", x, x, -value, s + 1, tol);
    }
  }
  PropertyReport report;
  report.property = "normalized";
  report.samples = samples;
  report.tolerance = tol;
  return report;
}

}  // namespace proplab
