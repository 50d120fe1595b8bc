// Copyright 2026 The chainauction Authors.
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

#ifndef CHAINAUCTION_CURVE_HPP_
#define CHAINAUCTION_CURVE_HPP_

#include <string>
#include <vector>

#include "chainauction/rational.hpp"

namespace chainauction {

using AgentId = std::string;

// A single sealed bid: a seller's cost, a converter's conversion cost, or
// a buyer's value. Amounts are non-negative for real agents; synthetic
// curve entries produced by curve algebra may be negative.
struct Bid {
  AgentId agent;
  Rat amount;
};

enum class CurveKind { supply, demand };

struct CurveEntry {
  Rat price;
  AgentId agent;  // empty for synthetic (derived) entries
};

// A sorted price curve. Supply curves are non-decreasing (cheapest first),
// demand curves are non-increasing (highest value first). Indexing is
// 1-based to match the usual S_1..S_n / B_1..B_n notation. Beyond the last
// entry the curve continues with a sentinel: +inf for supply, -inf for
// demand, so threshold formulas like max(S_l, B_{l+1}) stay well defined.
//
// Curves are immutable after construction and freely shareable.
class PriceCurve {
 public:
  PriceCurve() : kind_(CurveKind::supply) {}

  // Takes entries already in curve order (used by curve algebra, which must
  // preserve positional alignment). Throws BadParameter if unsorted.
  PriceCurve(CurveKind kind, std::vector<CurveEntry> entries);

  // Sorts bids into a curve. Ties are broken by agent id (lexicographic,
  // ascending), which makes every downstream selection deterministic.
  static PriceCurve from_bids(CurveKind kind, const std::vector<Bid>& bids);

  CurveKind kind() const { return kind_; }
  int size() const { return static_cast<int>(entries_.size()); }

  // 1-based access; throws BadParameter when i is out of [1, size()].
  const CurveEntry& entry(int i) const;
  const Rat& price(int i) const { return entry(i).price; }

  // 1-based access with the out-of-range sentinel for i > size().
  ExtRat price_ext(int i) const;

  // The first q agents of the curve (the winners when q units trade).
  std::vector<AgentId> top_agents(int q) const;

  // The first n entries; ids of the discarded entries are appended to
  // *dropped when given. Truncating to n >= size() is the identity.
  PriceCurve truncated(int n, std::vector<AgentId>* dropped = nullptr) const;

  const std::vector<CurveEntry>& entries() const { return entries_; }

 private:
  CurveKind kind_;
  std::vector<CurveEntry> entries_;
};

// Pointwise sum of two equal-length supply curves (entries are synthetic).
// Throws LengthMismatch / BadParameter on misuse. Exact: no rounding.
PriceCurve curve_add(const PriceCurve& a, const PriceCurve& b);

// Pointwise difference, demand minus supply, yielding a demand curve (the
// residual willingness to pay). Equal lengths required.
PriceCurve curve_sub(const PriceCurve& demand, const PriceCurve& supply);

// The largest i with D_i >= S_i (0 if none), scanning i = 1..min length.
// Because demand is non-increasing and supply non-decreasing, the predicate
// D_i >= S_i is monotone in i, so this is the optimal trade size.
int trade_quantity(const PriceCurve& supply, const PriceCurve& demand);

// Same as trade_quantity but with the strict equal-length contract used by
// chain curve algebra; throws LengthMismatch when |S| != |D|.
int optimal_trade_size(const PriceCurve& supply, const PriceCurve& demand);

}  // namespace chainauction

#endif  // CHAINAUCTION_CURVE_HPP_
