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

#ifndef CHAINAUCTION_INSTANCE_HPP_
#define CHAINAUCTION_INSTANCE_HPP_

#include <string>
#include <vector>

#include "chainauction/curve.hpp"

namespace chainauction {

// A linear supply chain for goods 1..t:
//   market 0          sells good 1 (supply market),
//   market r (1..t-1) converts good r into good r+1 (conversion market),
//   market t          consumes good t (demand market).
// t = 1 degenerates to a plain double auction: supply + demand only.
struct SupplyChainInstance {
  int goods = 1;  // t >= 1
  std::vector<Bid> supply;
  std::vector<std::vector<Bid>> conversions;  // size t-1
  std::vector<Bid> demand;

  int num_markets() const { return goods + 1; }

  const std::vector<Bid>& market(int m) const;
  std::vector<Bid>& market(int m);

  // supply/conversion bids are costs (supply side); demand bids are values.
  CurveKind kind_of(int m) const {
    return m == goods ? CurveKind::demand : CurveKind::supply;
  }

  // Throws EmptyMarket / BadParameter: every market non-empty, conversion
  // count matches goods-1, amounts non-negative, agent ids unique.
  void validate() const;

  // Finds the agent's market, or -1 if absent.
  int market_of(const AgentId& agent) const;

  // Returns a copy with one agent's bid amount replaced (for audits).
  SupplyChainInstance with_bid(const AgentId& agent, const Rat& amount) const;
};

// Canonical agent ids for instances built from bare numbers:
// supply "s1..", conversion market r "c<r>_1..", demand "d1..".
AgentId default_agent_id(int market, int goods, int index_1based);

// Each market's local sorted curve (untruncated) plus n, the minimum
// market size. No more than n trades can clear, so protocols keep only
// each curve's n best entries.
struct MarketCurves {
  std::vector<PriceCurve> curves;  // index = market
  int n = 0;
};
MarketCurves build_market_curves(const SupplyChainInstance& instance);

// The full chain curve algebra, computed centrally (the distributed
// protocols must arrive at exactly these curves):
//   agg_supply[r-1]  = S^r       cumulative cost of producing good r,
//   back_demand[r-1] = D^r       residual demand for good r,
//   conv_demand[r-1] = D^{r->r+1} residual demand for conversion r,
// all truncated to length n. The difference D^r - S^r is the same vector
// for every r, so every market sees the same optimal trade size.
struct ChainCurves {
  std::vector<PriceCurve> agg_supply;   // r = 1..t
  std::vector<PriceCurve> back_demand;  // r = 1..t
  std::vector<PriceCurve> conv_demand;  // r = 1..t-1
  std::vector<PriceCurve> local;        // truncated local curve per market
  std::vector<AgentId> dropped;         // agents cut by truncation to n
  int n = 0;

  const PriceCurve& top_supply() const { return agg_supply.back(); }   // S^t
  const PriceCurve& top_demand() const { return back_demand.back(); }  // D^t
};
ChainCurves aggregate_chain_curves(const SupplyChainInstance& instance);

}  // namespace chainauction

#endif  // CHAINAUCTION_INSTANCE_HPP_
