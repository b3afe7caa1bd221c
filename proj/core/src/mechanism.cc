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

#include "proplab/mechanism.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proplab {
namespace {

void CheckBidValue(double b) {
  if (!std::isfinite(b)) throw std::invalid_argument("bid is not finite");
  if (b < 0.0) throw std::invalid_argument("bid is negative");
}

}  // namespace

BidProfile::BidProfile(Matrix bids) : bids_(std::move(bids)) {
  for (double b : bids_.data()) CheckBidValue(b);
}

void BidProfile::SetRow(int agent, std::span<const double> bid) {
  if (static_cast<int>(bid.size()) != bids_.cols()) {
    throw std::invalid_argument("SetRow: dimension mismatch");
  }
  for (double b : bid) CheckBidValue(b);
  std::copy(bid.begin(), bid.end(), bids_.row(agent).begin());
}

double Payment(std::span<const double> bid) {
  double total = 0.0;
  for (double b : bid) total += b;
  return total;
}

std::vector<double> Payments(const BidProfile& bids) {
  std::vector<double> q(bids.num_agents());
  for (int i = 0; i < bids.num_agents(); ++i) q[i] = Payment(bids.row(i));
  return q;
}

Mechanism Mechanism::Standard(int agents, int resources, TieBreak tie_break) {
  if (agents < 1 || resources < 1) {
    throw std::invalid_argument("Mechanism: need n >= 1 and m >= 1");
  }
  if (tie_break.kind == TieBreak::Kind::kToAgent &&
      (tie_break.agent < 0 || tie_break.agent >= agents)) {
    throw std::invalid_argument("Mechanism: tie-break agent out of range");
  }
  Mechanism mech;
  mech.agents_ = agents;
  mech.columns_ = resources;
  mech.tie_break_ = tie_break;
  return mech;
}

Mechanism Mechanism::Polyhedral(Matrix constraints, TieBreak tie_break) {
  const int rows = constraints.rows();
  const int agents = constraints.cols();
  if (agents < 1 || rows < 1) {
    throw std::invalid_argument("Mechanism: empty constraint matrix");
  }
  if (tie_break.kind == TieBreak::Kind::kToAgent &&
      (tie_break.agent < 0 || tie_break.agent >= agents)) {
    throw std::invalid_argument("Mechanism: tie-break agent out of range");
  }
  for (double a : constraints.data()) {
    if (!std::isfinite(a) || a < 0.0) {
      throw std::invalid_argument("Mechanism: constraint entries must be >= 0");
    }
  }
  Mechanism mech;
  mech.agents_ = agents;
  mech.columns_ = rows;
  mech.polyhedral_ = true;
  mech.tie_break_ = tie_break;
  mech.row_support_.assign(rows, 0);
  for (int i = 0; i < agents; ++i) {
    bool needed = false;
    for (int j = 0; j < rows; ++j) {
      if (constraints(j, i) > 0.0) {
        needed = true;
        ++mech.row_support_[j];
      }
    }
    if (!needed) {
      throw std::invalid_argument(
          "Mechanism: agent with no positive constraint entry has an "
          "undefined allocation");
    }
  }
  mech.constraints_ = std::move(constraints);
  return mech;
}

double Mechanism::TieShare(int agent) const {
  if (tie_break_.kind == TieBreak::Kind::kToAgent) {
    return agent == tie_break_.agent ? 1.0 : 0.0;
  }
  return 1.0 / agents_;
}

// Zero-total constraint rows are split like zero-bid columns, among the
// agents that actually use the row.
double Mechanism::RowTieShare(int row, int agent) const {
  if (tie_break_.kind == TieBreak::Kind::kToAgent &&
      constraints_(row, tie_break_.agent) > 0.0) {
    return agent == tie_break_.agent ? 1.0 : 0.0;
  }
  return 1.0 / row_support_[row];
}

void Mechanism::Share(int agent, std::span<const double> own,
                      std::span<const double> others,
                      std::span<double> out) const {
  if (!polyhedral_) {
    for (int j = 0; j < columns_; ++j) {
      const double total = own[j] + others[j];
      out[j] = total > 0.0 ? own[j] / total : TieShare(agent);
    }
    return;
  }
  double x = INFINITY;
  for (int j = 0; j < columns_; ++j) {
    const double a = constraints_(j, agent);
    if (a <= 0.0) continue;
    const double total = own[j] + others[j];
    const double share = total > 0.0 ? own[j] / total : RowTieShare(j, agent);
    x = std::min(x, share / a);
  }
  out[0] = std::min(x, 1.0);
}

void Mechanism::CheckProfile(const BidProfile& bids) const {
  if (bids.num_agents() != agents_ || bids.num_columns() != columns_) {
    throw std::invalid_argument("bid profile dimensions do not match");
  }
}

Allocation Mechanism::Allocate(const BidProfile& bids) const {
  CheckProfile(bids);
  Allocation out{Matrix(agents_, allocation_dim())};
  std::vector<double> others(columns_);
  for (int i = 0; i < agents_; ++i) {
    for (int j = 0; j < columns_; ++j) {
      // Summed exactly as OpponentTotals does.
      double p = 0.0;
      for (int k = 0; k < agents_; ++k) {
        if (k != i) p += bids(k, j);
      }
      others[j] = p;
    }
    Share(i, bids.row(i), others, out.shares.row(i));
  }
  return out;
}

bool Mechanism::IsFeasible(const Allocation& allocation, double tol) const {
  if (allocation.shares.rows() != agents_ ||
      allocation.shares.cols() != allocation_dim()) {
    return false;
  }
  for (double x : allocation.shares.data()) {
    if (!(x >= -tol && x <= 1.0 + tol)) return false;
  }
  if (!polyhedral_) {
    for (int j = 0; j < columns_; ++j) {
      double sum = 0.0;
      for (int i = 0; i < agents_; ++i) sum += allocation.shares(i, j);
      if (sum > 1.0 + tol) return false;
    }
    return true;
  }
  for (int j = 0; j < columns_; ++j) {
    double load = 0.0;
    for (int i = 0; i < agents_; ++i) {
      load += constraints_(j, i) * allocation.shares(i, 0);
    }
    if (load > 1.0 + tol) return false;
  }
  return true;
}

std::vector<double> OpponentTotals(const BidProfile& bids, int agent) {
  std::vector<double> p(bids.num_columns(), 0.0);
  for (int k = 0; k < bids.num_agents(); ++k) {
    if (k == agent) continue;
    for (int j = 0; j < bids.num_columns(); ++j) p[j] += bids(k, j);
  }
  return p;
}

Instance::Instance(Mechanism mechanism, std::vector<Valuation> valuations,
                   std::optional<std::vector<double>> budgets)
    : mechanism_(std::move(mechanism)),
      valuations_(std::move(valuations)),
      budgets_(std::move(budgets)) {
  if (static_cast<int>(valuations_.size()) != mechanism_.num_agents()) {
    throw std::invalid_argument("Instance: need one valuation per agent");
  }
  for (const Valuation& v : valuations_) {
    if (v.dim() != mechanism_.allocation_dim()) {
      throw std::invalid_argument(
          "Instance: valuation dimension does not match the allocation");
    }
  }
  if (budgets_) {
    if (static_cast<int>(budgets_->size()) != mechanism_.num_agents()) {
      throw std::invalid_argument("Instance: need one budget per agent");
    }
    for (double c : *budgets_) {
      if (std::isnan(c) || c < 0.0) {
        throw std::invalid_argument("Instance: budgets must be >= 0");
      }
    }
  }
}

double UtilityAgainst(const Mechanism& mechanism, int agent,
                      const Valuation& valuation, std::span<const double> own,
                      std::span<const double> others,
                      std::span<double> scratch) {
  mechanism.Share(agent, own, others, scratch);
  return valuation.EvalUnchecked(scratch) - Payment(own);
}

double Utility(const Instance& instance, int agent, const BidProfile& bids) {
  const Mechanism& mech = instance.mechanism();
  mech.CheckProfile(bids);
  const Allocation x = mech.Allocate(bids);
  return instance.valuation(agent)(x.row(agent)) - Payment(bids.row(agent));
}

}  // namespace proplab
