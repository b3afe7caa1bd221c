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

#ifndef PROPLAB_VALUATION_H_
#define PROPLAB_VALUATION_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace proplab {

// Concave, nondecreasing piecewise-linear curve on [0, 1] with f(0) = 0.
// Breakpoints must start at x = 0 and end at x = 1; slopes are validated to
// be nonnegative and nonincreasing at construction.
class ConcaveCurve {
 public:
  ConcaveCurve(std::vector<double> xs, std::vector<double> ys);

  static ConcaveCurve Linear(double slope);
  // Consecutive segment lengths (summing to 1) with their slopes.
  static ConcaveCurve FromSegments(const std::vector<double>& lengths,
                                   const std::vector<double>& slopes);

  double operator()(double x) const;

  int num_segments() const { return static_cast<int>(xs_.size()) - 1; }
  double slope(int k) const;
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  // min{f(x), cap}, which is again concave piecewise-linear.
  ConcaveCurve Capped(double cap) const;

  bool operator==(const ConcaveCurve&) const = default;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

enum class ValuationFamily {
  kLinear,
  kAdditiveConcave,
  kMinCoordinate,
  kScaledCoordinate,
  kThresholdLow,
  kThresholdHigh,
  kPolyJump,
  kGeometricMean,
  kBudgetTruncated,
  kCustom,
};

std::string_view FamilyName(ValuationFamily family);

// Immutable valuation handle: v : [0,1]^dim -> R_{>=0}. Copies share state.
//
// ThresholdLow(h, v):  0 at 0; v if every coordinate is below h and some is
//                      positive; 2v once some coordinate reaches h.
// ThresholdHigh(h, V): 0 at 0; V if some coordinate is below h (and some is
//                      positive); 2V once every coordinate reaches h.
// PolyJump(eps):       single variable; 0 at 0, 1 + eps*x on (0,1), 2 at 1.
class Valuation {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  static Valuation Linear(std::vector<double> weights);
  static Valuation AdditiveConcave(std::vector<ConcaveCurve> curves);
  static Valuation MinCoordinate(int dim, double scale);
  static Valuation ScaledCoordinate(int dim, int resource, double scale);
  static Valuation ThresholdLow(int dim, double threshold, double value);
  static Valuation ThresholdHigh(int dim, double threshold, double value);
  static Valuation PolyJump(double eps);
  static Valuation GeometricMean();
  // Arbitrary callable; used for fixtures. Never serializable, no symmetry.
  static Valuation Custom(std::string name, int dim, Fn fn);

  // Checked evaluation: throws std::invalid_argument if x has the wrong
  // dimension or leaves [0,1].
  double operator()(std::span<const double> x) const;
  double operator()(std::initializer_list<double> x) const {
    return (*this)(std::span<const double>(x.begin(), x.size()));
  }
  // Hot-path evaluation without domain checks.
  double EvalUnchecked(std::span<const double> x) const;

  int dim() const;
  ValuationFamily family() const;

  // Separable as sum_j f_j(x_j).
  bool IsAdditive() const;
  // Per-resource concave piecewise-linear form when the valuation is
  // additive with concave components (also for budget-capped dim-1 curves).
  std::optional<std::vector<ConcaveCurve>> SeparableConcaveForm() const;

  // Resources with equal labels are interchangeable for this valuation.
  std::vector<std::int64_t> SymmetryLabels() const;

  // v(1, ..., 1); the largest value by monotonicity.
  double MaxValue() const;

  // Accessors for the family parameters (serialization and builders).
  const std::vector<double>& weights() const;          // kLinear
  const std::vector<ConcaveCurve>& curves() const;     // kAdditiveConcave
  double scale() const;  // kMin/kScaled; threshold value for kThreshold*
  int resource() const;  // kScaledCoordinate
  double threshold() const;  // kThreshold*
  double eps() const;        // kPolyJump
  double cap() const;        // kBudgetTruncated
  const Valuation& inner() const;  // kBudgetTruncated
  const std::string& custom_name() const;  // kCustom

  struct Rep;

 private:
  explicit Valuation(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  friend Valuation Truncate(const Valuation& v, double cap);

  std::shared_ptr<const Rep> rep_;
};

// v^c(x) = min{v(x), c}.
Valuation Truncate(const Valuation& v, double cap);

enum class PropertyVerdict { kHoldsOnSamples, kViolated };

struct PropertyReport {
  std::string property;  // "subadditive", "monotone" or "normalized"
  PropertyVerdict verdict = PropertyVerdict::kHoldsOnSamples;
  // x and y of the violating pair: x + y for subadditivity, x <= y for
  // monotonicity.
  std::optional<std::pair<std::vector<double>, std::vector<double>>> witness;
  double violation = 0.0;  // amount by which the inequality failed
  int samples = 0;
  double tolerance = 0.0;

  bool holds() const { return verdict == PropertyVerdict::kHoldsOnSamples; }
};

inline constexpr double kDefaultPropertyTolerance = 1e-9;

// Tests v(x+y) <= v(x) + v(y) + tol. Exhausts disjoint 0/1 corner pairs
// (dim <= 6) before drawing seeded random pairs with x+y in the unit box.
PropertyReport CheckSubadditive(const Valuation& v, int samples,
                                std::uint64_t seed,
                                double tol = kDefaultPropertyTolerance);
// Tests v(x) <= v(y) + tol over ordered pairs x <= y.
PropertyReport CheckMonotone(const Valuation& v, int samples,
                             std::uint64_t seed,
                             double tol = kDefaultPropertyTolerance);
// Tests v(0) == 0 and v >= 0 on samples.
PropertyReport CheckNormalized(const Valuation& v, int samples,
                               std::uint64_t seed,
                               double tol = kDefaultPropertyTolerance);

}  // namespace proplab

#endif  // PROPLAB_VALUATION_H_
