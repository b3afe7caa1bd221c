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

#ifndef PROPLAB_MECHANISM_H_
#define PROPLAB_MECHANISM_H_

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "proplab/matrix.h"
#include "proplab/valuation.h"

namespace proplab {

// Absolute tolerance for every feasibility check in the library.
inline constexpr double kFeasibilityTol = 1e-12;

using BidVector = std::vector<double>;

// How a column (or constraint row) on which everybody bids zero is handed
// out. Agents are 0-based.
struct TieBreak {
  enum class Kind { kSplitEqually, kToAgent };
  Kind kind = Kind::kSplitEqually;
  int agent = 0;

  static TieBreak SplitEqually() { return {}; }
  static TieBreak ToAgent(int agent) { return {Kind::kToAgent, agent}; }
  bool operator==(const TieBreak&) const = default;
};

// n x m matrix of nonnegative finite bids (m = constraint rows in polyhedral
// mode).
class BidProfile {
 public:
  BidProfile() = default;
  explicit BidProfile(Matrix bids);
  BidProfile(std::initializer_list<std::initializer_list<double>> rows)
      : BidProfile(Matrix(rows)) {}
  static BidProfile Zeros(int agents, int columns) {
    return BidProfile(Matrix(agents, columns));
  }

  int num_agents() const { return bids_.rows(); }
  int num_columns() const { return bids_.cols(); }
  const Matrix& bids() const { return bids_; }
  std::span<const double> row(int agent) const { return bids_.row(agent); }
  double operator()(int agent, int column) const {
    return bids_(agent, column);
  }

  // Replaces one agent's bid vector; validates the new entries.
  void SetRow(int agent, std::span<const double> bid);

  bool operator==(const BidProfile&) const = default;

 private:
  Matrix bids_;
};

// Per-agent allocation: n x m shares (standard) or n x 1 (polyhedral).
struct Allocation {
  Matrix shares;

  int num_agents() const { return shares.rows(); }
  std::span<const double> row(int agent) const { return shares.row(agent); }
};

// q_i = sum_j b_ij.
std::vector<double> Payments(const BidProfile& bids);
double Payment(std::span<const double> bid);

// The proportional allocation rule and its polyhedral variant. Immutable.
class Mechanism {
 public:
  static Mechanism Standard(int agents, int resources,
                            TieBreak tie_break = TieBreak::SplitEqually());
  // `constraints` has one row per constraint and one column per agent; every
  // agent needs at least one positive entry.
  static Mechanism Polyhedral(Matrix constraints,
                              TieBreak tie_break = TieBreak::SplitEqually());

  int num_agents() const { return agents_; }
  // Number of bid columns: resources, or constraint rows.
  int num_columns() const { return columns_; }
  // Length of each agent's allocation vector: m, or 1 in polyhedral mode.
  int allocation_dim() const { return polyhedral_ ? 1 : columns_; }
  bool polyhedral() const { return polyhedral_; }
  const Matrix& constraints() const { return constraints_; }
  const TieBreak& tie_break() const { return tie_break_; }

  // Throws std::invalid_argument for dimension mismatches.
  Allocation Allocate(const BidProfile& bids) const;

  // Allocation of `agent` from its own bids and the opponents' per-column bid
  // totals. `out` must hold allocation_dim() entries. This is the hot path
  // used by every solver; Allocate() is built from it.
  void Share(int agent, std::span<const double> own,
             std::span<const double> others, std::span<double> out) const;

  // Does the allocation satisfy the column sums (or A x <= 1)?
  bool IsFeasible(const Allocation& allocation,
                  double tol = kFeasibilityTol) const;

  void CheckProfile(const BidProfile& bids) const;

 private:
  Mechanism() = default;
  double TieShare(int agent) const;
  double RowTieShare(int row, int agent) const;

  int agents_ = 0;
  int columns_ = 0;
  bool polyhedral_ = false;
  TieBreak tie_break_;
  Matrix constraints_;
  std::vector<int> row_support_;  // agents with a positive entry, per row
};

// Opponents' per-column totals p_i = sum_{k != i} b_k.
std::vector<double> OpponentTotals(const BidProfile& bids, int agent);

// A mechanism together with one valuation (and optional budget) per agent.
class Instance {
 public:
  Instance(Mechanism mechanism, std::vector<Valuation> valuations,
           std::optional<std::vector<double>> budgets = std::nullopt);

  const Mechanism& mechanism() const { return mechanism_; }
  int num_agents() const { return mechanism_.num_agents(); }
  int num_columns() const { return mechanism_.num_columns(); }
  const Valuation& valuation(int agent) const { return valuations_[agent]; }
  const std::vector<Valuation>& valuations() const { return valuations_; }
  bool has_budgets() const { return budgets_.has_value(); }
  const std::optional<std::vector<double>>& budgets() const {
    return budgets_;
  }
  // +infinity when the instance carries no budgets.
  double budget(int agent) const {
    return budgets_ ? (*budgets_)[agent]
                    : std::numeric_limits<double>::infinity();
  }

 private:
  Mechanism mechanism_;
  std::vector<Valuation> valuations_;
  std::optional<std::vector<double>> budgets_;
};

// u_i(b) = v_i(x_i(b)) - q_i(b).
double Utility(const Instance& instance, int agent, const BidProfile& bids);

// Utility from own bids against opponents' totals; `scratch` needs
// allocation_dim() entries.
double UtilityAgainst(const Mechanism& mechanism, int agent,
                      const Valuation& valuation, std::span<const double> own,
                      std::span<const double> others,
                      std::span<double> scratch);

}  // namespace proplab

#endif  // PROPLAB_MECHANISM_H_
