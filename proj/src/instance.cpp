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

#include "chainauction/instance.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace chainauction {

const std::vector<Bid>& SupplyChainInstance::market(int m) const {
  if (m == 0) return supply;
  if (m == goods) return demand;
  if (m < 1 || m > goods - 1) {
    throw BadParameter("market index " + std::to_string(m) + " out of range");
  }
  return conversions[m - 1];
}

std::vector<Bid>& SupplyChainInstance::market(int m) {
  return const_cast<std::vector<Bid>&>(
      static_cast<const SupplyChainInstance&>(*this).market(m));
}

void SupplyChainInstance::validate() const {
  if (goods < 1) throw BadParameter("chain needs at least one good");
  if (static_cast<int>(conversions.size()) != goods - 1) {
    throw BadParameter("expected " + std::to_string(goods - 1) +
                       " conversion markets, got " +
                       std::to_string(conversions.size()));
  }
  std::set<AgentId> seen;
  for (int m = 0; m <= goods; ++m) {
    const auto& bids = market(m);
    if (bids.empty()) {
      throw EmptyMarket("market " + std::to_string(m) + " has no bids");
    }
    for (const Bid& b : bids) {
      if (b.agent.empty()) throw BadParameter("bid with empty agent id");
      if (b.amount.is_negative()) {
        throw BadParameter("negative bid amount for agent '" + b.agent + "'");
      }
      if (!seen.insert(b.agent).second) {
        throw BadParameter("duplicate agent id '" + b.agent + "'");
      }
    }
  }
}

int SupplyChainInstance::market_of(const AgentId& agent) const {
  for (int m = 0; m <= goods; ++m) {
    for (const Bid& b : market(m)) {
      if (b.agent == agent) return m;
    }
  }
  return -1;
}

SupplyChainInstance SupplyChainInstance::with_bid(const AgentId& agent,
                                                  const Rat& amount) const {
  SupplyChainInstance copy = *this;
  for (int m = 0; m <= goods; ++m) {
    for (Bid& b : copy.market(m)) {
      if (b.agent == agent) {
        b.amount = amount;
        return copy;
      }
    }
  }
  throw BadParameter("unknown agent '" + agent + "'");
}

AgentId default_agent_id(int market, int goods, int index_1based) {
  if (market == 0) return "s" + std::to_string(index_1based);
  if (market == goods) return "d" + std::to_string(index_1based);
  return "c" + std::to_string(market) + "_" + std::to_string(index_1based);
}

MarketCurves build_market_curves(const SupplyChainInstance& instance) {
  instance.validate();
  MarketCurves out;
  out.n = 0;
  for (int m = 0; m <= instance.goods; ++m) {
    out.curves.push_back(
        PriceCurve::from_bids(instance.kind_of(m), instance.market(m)));
    int sz = out.curves.back().size();
    out.n = m == 0 ? sz : std::min(out.n, sz);
  }
  return out;
}

ChainCurves aggregate_chain_curves(const SupplyChainInstance& instance) {
  MarketCurves markets = build_market_curves(instance);
  ChainCurves out;
  out.n = markets.n;
  for (const PriceCurve& c : markets.curves) {
    out.local.push_back(c.truncated(out.n, &out.dropped));
  }
  int t = instance.goods;
  // Forward pass: S^1 = supply, S^{r+1} = S^r + conversion r.
  out.agg_supply.push_back(out.local[0]);
  for (int r = 1; r <= t - 1; ++r) {
    out.agg_supply.push_back(curve_add(out.agg_supply.back(), out.local[r]));
  }
  // Backward pass: D^t = demand, D^r = D^{r+1} - conversion r, and the
  // conversion market's own demand D^{r->r+1} = D^{r+1} - S^r.
  out.back_demand.assign(t, PriceCurve());
  out.back_demand[t - 1] = out.local[t];
  out.conv_demand.assign(t - 1, PriceCurve());
  for (int r = t - 1; r >= 1; --r) {
    out.conv_demand[r - 1] = curve_sub(out.back_demand[r], out.agg_supply[r - 1]);
    out.back_demand[r - 1] = curve_sub(out.back_demand[r], out.local[r]);
  }
  return out;
}

}  // namespace chainauction
