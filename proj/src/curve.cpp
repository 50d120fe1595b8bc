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

#include "chainauction/curve.hpp"

#include <algorithm>
#include <utility>

namespace chainauction {

PriceCurve::PriceCurve(CurveKind kind, std::vector<CurveEntry> entries)
    : kind_(kind), entries_(std::move(entries)) {
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    bool ok = kind_ == CurveKind::supply
                  ? entries_[i - 1].price <= entries_[i].price
                  : entries_[i - 1].price >= entries_[i].price;
    if (!ok) throw BadParameter("curve entries are not in curve order");
  }
}

PriceCurve PriceCurve::from_bids(CurveKind kind,
                                 const std::vector<Bid>& bids) {
  std::vector<CurveEntry> entries;
  entries.reserve(bids.size());
  for (const Bid& b : bids) entries.push_back({b.amount, b.agent});
  std::sort(entries.begin(), entries.end(),
            [kind](const CurveEntry& a, const CurveEntry& b) {
              if (a.price != b.price) {
                return kind == CurveKind::supply ? a.price < b.price
                                                 : a.price > b.price;
              }
              return a.agent < b.agent;
            });
  return PriceCurve(kind, std::move(entries));
}

const CurveEntry& PriceCurve::entry(int i) const {
  if (i < 1 || i > size()) {
    throw BadParameter("curve index " + std::to_string(i) +
                       " outside [1, " + std::to_string(size()) + "]");
  }
  return entries_[i - 1];
}

ExtRat PriceCurve::price_ext(int i) const {
  if (i < 1) throw BadParameter("curve index must be >= 1");
  if (i > size()) {
    return kind_ == CurveKind::supply ? ExtRat::pos_inf() : ExtRat::neg_inf();
  }
  return ExtRat(entries_[i - 1].price);
}

std::vector<AgentId> PriceCurve::top_agents(int q) const {
  if (q < 0 || q > size()) throw BadParameter("winner count out of range");
  std::vector<AgentId> out;
  out.reserve(q);
  for (int i = 0; i < q; ++i) out.push_back(entries_[i].agent);
  return out;
}

PriceCurve PriceCurve::truncated(int n, std::vector<AgentId>* dropped) const {
  if (n < 0) throw BadParameter("cannot truncate to negative length");
  if (n >= size()) return *this;
  if (dropped != nullptr) {
    for (int i = n; i < size(); ++i) dropped->push_back(entries_[i].agent);
  }
  std::vector<CurveEntry> kept(entries_.begin(), entries_.begin() + n);
  return PriceCurve(kind_, std::move(kept));
}

namespace {

void require_equal_length(const PriceCurve& a, const PriceCurve& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("curve lengths differ: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
}

}  // namespace

PriceCurve curve_add(const PriceCurve& a, const PriceCurve& b) {
  if (a.kind() != CurveKind::supply || b.kind() != CurveKind::supply) {
    throw BadParameter("curve_add combines two supply curves");
  }
  require_equal_length(a, b);
  std::vector<CurveEntry> entries;
  entries.reserve(a.size());
  for (int i = 1; i <= a.size(); ++i) {
    entries.push_back({a.price(i) + b.price(i), AgentId()});
  }
  return PriceCurve(CurveKind::supply, std::move(entries));
}

PriceCurve curve_sub(const PriceCurve& demand, const PriceCurve& supply) {
  if (demand.kind() != CurveKind::demand ||
      supply.kind() != CurveKind::supply) {
    throw BadParameter("curve_sub takes demand minus supply");
  }
  require_equal_length(demand, supply);
  std::vector<CurveEntry> entries;
  entries.reserve(demand.size());
  for (int i = 1; i <= demand.size(); ++i) {
    entries.push_back({demand.price(i) - supply.price(i), AgentId()});
  }
  return PriceCurve(CurveKind::demand, std::move(entries));
}

int trade_quantity(const PriceCurve& supply, const PriceCurve& demand) {
  if (supply.kind() != CurveKind::supply ||
      demand.kind() != CurveKind::demand) {
    throw BadParameter("trade_quantity takes (supply, demand)");
  }
  int m = std::min(supply.size(), demand.size());
  int l = 0;
  while (l < m && demand.price(l + 1) >= supply.price(l + 1)) ++l;
  return l;
}

int optimal_trade_size(const PriceCurve& supply, const PriceCurve& demand) {
  if (supply.size() != demand.size()) {
    throw LengthMismatch("optimal_trade_size requires equal-length curves");
  }
  return trade_quantity(supply, demand);
}

}  // namespace chainauction
