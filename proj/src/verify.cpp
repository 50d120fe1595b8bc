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

#include "chainauction/verify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace chainauction {

Mechanism make_mechanism(const DaRuleSpec& rule, ProtocolKind protocol,
                         std::optional<int> coin, bool allow_non_ic) {
  if (rule.randomized() && !coin.has_value()) {
    throw RuleNotProbeFriendly(
        "a randomized rule needs a fixed coin to act as a deterministic "
        "mechanism");
  }
  ChainRunOptions options;
  options.coin = rule.randomized() ? coin : std::nullopt;
  options.allow_non_ic = allow_non_ic;
  return [rule, protocol, options](const SupplyChainInstance& instance) {
    return run_chain(instance, rule, protocol, options);
  };
}

Rat optimal_gain(const SupplyChainInstance& instance) {
  ChainCurves chain = aggregate_chain_curves(instance);
  const PriceCurve& S = chain.top_supply();
  const PriceCurve& D = chain.top_demand();
  int l = optimal_trade_size(S, D);
  Rat gain;
  for (int i = 1; i <= l; ++i) gain += D.price(i) - S.price(i);
  return gain;
}

Rat optimal_gain_enumeration(const SupplyChainInstance& instance) {
  instance.validate();
  // Gains separate across markets: for a given quantity q, each market
  // independently contributes its best q-subset. Enumerate all subsets of
  // each market by bitmask — deliberately free of any sorting insight.
  int n = instance.market(0).size();
  for (int m = 0; m <= instance.goods; ++m) {
    int sz = static_cast<int>(instance.market(m).size());
    if (sz > 20) {
      throw BadParameter("enumeration oracle limited to 20 bids per market");
    }
    n = std::min(n, sz);
  }
  Rat best;  // q = 0 yields 0
  for (int q = 1; q <= n; ++q) {
    Rat total;
    for (int m = 0; m <= instance.goods; ++m) {
      const auto& bids = instance.market(m);
      int sz = static_cast<int>(bids.size());
      bool is_demand = m == instance.goods;
      std::optional<Rat> best_subset;
      for (unsigned mask = 0; mask < (1u << sz); ++mask) {
        if (__builtin_popcount(mask) != q) continue;
        Rat sum;
        for (int i = 0; i < sz; ++i) {
          if (mask & (1u << i)) sum += bids[i].amount;
        }
        if (!best_subset.has_value() ||
            (is_demand ? sum > *best_subset : sum < *best_subset)) {
          best_subset = sum;
        }
      }
      total += is_demand ? *best_subset : -*best_subset;
    }
    if (total > best) best = total;
  }
  return best;
}

namespace {

// (market, amount) lookup for every agent of the truthful instance.
std::map<AgentId, std::pair<int, Rat>> agent_index(
    const SupplyChainInstance& instance) {
  std::map<AgentId, std::pair<int, Rat>> out;
  for (int m = 0; m <= instance.goods; ++m) {
    for (const Bid& b : instance.market(m)) out[b.agent] = {m, b.amount};
  }
  return out;
}

bool agent_wins(const ChainOutcome& outcome, int market,
                const AgentId& agent) {
  const auto& w = outcome.winners[market];
  return std::find(w.begin(), w.end(), agent) != w.end();
}

// Utility of `agent` with its *true* value from `truth`, under an outcome
// that may come from a deviated profile.
Rat agent_utility(const SupplyChainInstance& truth,
                  const ChainOutcome& outcome, const AgentId& agent) {
  int m = truth.market_of(agent);
  if (m < 0) throw BadParameter("unknown agent '" + agent + "'");
  Rat value;
  for (const Bid& b : truth.market(m)) {
    if (b.agent == agent) value = b.amount;
  }
  auto it = outcome.transfers.find(agent);
  Rat transfer = it == outcome.transfers.end() ? Rat(0) : it->second;
  if (!agent_wins(outcome, m, agent)) return -transfer;
  bool buyer = m == truth.goods;
  // Buyers: value minus payment; sellers/converters: receipts minus cost.
  return (buyer ? value : -value) - transfer;
}

}  // namespace

Rat achieved_gain(const SupplyChainInstance& instance,
                  const ChainOutcome& outcome) {
  auto index = agent_index(instance);
  Rat gain;
  for (int m = 0; m < static_cast<int>(outcome.winners.size()); ++m) {
    for (const AgentId& a : outcome.winners[m]) {
      const auto& [market, amount] = index.at(a);
      gain += market == instance.goods ? amount : -amount;
    }
  }
  return gain;
}

Rat efficiency_ratio(const SupplyChainInstance& instance,
                     const ChainOutcome& outcome) {
  Rat opt = optimal_gain(instance);
  if (opt.is_zero()) return Rat(1);
  return achieved_gain(instance, outcome) / opt;
}

std::vector<Rat> deviation_grid(const SupplyChainInstance& instance,
                                const AgentId& agent) {
  int m = instance.market_of(agent);
  if (m < 0) throw BadParameter("unknown agent '" + agent + "'");
  std::set<Rat, std::less<Rat>> values;
  for (const Bid& b : instance.market(m)) values.insert(b.amount);
  std::vector<Rat> sorted(values.begin(), values.end());
  std::vector<Rat> grid;
  grid.push_back(sorted.front() - Rat(1));
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    grid.push_back((sorted[i] + sorted[i + 1]) / Rat(2));
  }
  grid.push_back(sorted.back() + Rat(1));
  // Bids are non-negative by contract; clamp the low extreme.
  for (Rat& g : grid) {
    if (g.is_negative()) g = Rat(0);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

using UtilityFn =
    std::function<Rat(const SupplyChainInstance&, const AgentId&)>;

AuditReport ic_audit_impl(const SupplyChainInstance& instance,
                          const UtilityFn& utility) {
  AuditReport report;
  report.audit = "ic";
  auto index = agent_index(instance);
  for (const auto& [agent, bid] : index) {
    Rat truthful = utility(instance, agent);
    for (const Rat& dev : deviation_grid(instance, agent)) {
      if (dev == bid.second) continue;
      ++report.checks;
      Rat deviated = utility(instance.with_bid(agent, dev), agent);
      if (deviated > truthful) {
        report.violations.push_back(
            {agent, "bidding " + dev.to_string() + " instead of " +
                        bid.second.to_string() + " raises utility from " +
                        truthful.to_string() + " to " + deviated.to_string()});
      }
    }
  }
  return report;
}

}  // namespace

AuditReport ic_audit(const Mechanism& mechanism,
                     const SupplyChainInstance& instance) {
  return ic_audit_impl(
      instance, [&](const SupplyChainInstance& profile, const AgentId& agent) {
        return agent_utility(instance, mechanism(profile), agent);
      });
}

AuditReport ic_audit_expected(const DaRuleSpec& rule, ProtocolKind protocol,
                              const SupplyChainInstance& instance,
                              bool allow_non_ic) {
  if (!rule.randomized()) {
    return ic_audit(make_mechanism(rule, protocol, std::nullopt, allow_non_ic),
                    instance);
  }
  Mechanism on_heads = make_mechanism(rule, protocol, 1, allow_non_ic);
  Mechanism on_tails = make_mechanism(rule, protocol, 0, allow_non_ic);
  Rat alpha = rule.param;
  return ic_audit_impl(
      instance, [&](const SupplyChainInstance& profile, const AgentId& agent) {
        return alpha * agent_utility(instance, on_heads(profile), agent) +
               (Rat(1) - alpha) *
                   agent_utility(instance, on_tails(profile), agent);
      });
}

AuditReport ir_audit(const SupplyChainInstance& instance,
                     const ChainOutcome& outcome) {
  AuditReport report;
  report.audit = "ir";
  auto index = agent_index(instance);
  std::set<AgentId> winners;
  for (const auto& w : outcome.winners) winners.insert(w.begin(), w.end());
  for (const auto& [agent, bid] : index) {
    ++report.checks;
    if (winners.count(agent)) {
      Rat u = agent_utility(instance, outcome, agent);
      if (u.is_negative()) {
        report.violations.push_back(
            {agent, "winner utility " + u.to_string() + " is negative"});
      }
    } else {
      auto it = outcome.transfers.find(agent);
      if (it != outcome.transfers.end() && !it->second.is_zero()) {
        report.violations.push_back(
            {agent, "loser has transfer " + it->second.to_string()});
      }
    }
  }
  return report;
}

AuditReport nd_audit(const SupplyChainInstance& instance,
                     const ChainOutcome& outcome) {
  AuditReport report;
  report.audit = "nd";
  for (int m = 0; m <= instance.goods; ++m) {
    const auto& winners = outcome.winners[m];
    int q = static_cast<int>(winners.size());
    PriceCurve curve =
        PriceCurve::from_bids(instance.kind_of(m), instance.market(m));
    // (b) Winners are the market's q best bids, in curve order.
    ++report.checks;
    if (winners != curve.top_agents(q)) {
      report.violations.push_back(
          {winners.empty() ? AgentId("market" + std::to_string(m))
                           : winners.front(),
           "market " + std::to_string(m) +
               " winners are not the best bids in order"});
    }
    if (q == 0) continue;
    // (a) One uniform transfer magnitude per market.
    ++report.checks;
    Rat price = outcome.transfers.at(winners.front()).abs();
    bool flat = true;
    for (const AgentId& w : winners) {
      if (outcome.transfers.at(w).abs() != price) flat = false;
    }
    if (!flat) {
      report.violations.push_back(
          {winners.front(), "market " + std::to_string(m) +
                                " charges non-uniform transfers"});
      continue;  // no single market price to test envy against
    }
    // (c) No loser's bid strictly beats the market price.
    bool buyer_side = m == instance.goods;
    std::set<AgentId> winner_set(winners.begin(), winners.end());
    for (const Bid& b : instance.market(m)) {
      if (winner_set.count(b.agent)) continue;
      ++report.checks;
      bool envy = buyer_side ? b.amount > price : b.amount < price;
      if (envy) {
        report.violations.push_back(
            {b.agent, "losing bid " + b.amount.to_string() +
                          " strictly beats market price " + price.to_string()});
      }
    }
  }
  return report;
}

AuditReport balance_audit(const SupplyChainInstance& instance,
                          const ChainOutcome& outcome) {
  AuditReport report;
  report.audit = "balance";
  ++report.checks;
  for (int q : outcome.per_market_q) {
    if (q != outcome.per_market_q.front()) {
      report.violations.push_back(
          {AgentId("chain"), "markets clear different quantities"});
      break;
    }
  }
  std::set<AgentId> winners;
  for (int m = 0; m < static_cast<int>(outcome.winners.size()); ++m) {
    ++report.checks;
    if (static_cast<int>(outcome.winners[m].size()) != outcome.per_market_q[m]) {
      report.violations.push_back(
          {AgentId("market" + std::to_string(m)),
           "winner count differs from cleared quantity"});
    }
    winners.insert(outcome.winners[m].begin(), outcome.winners[m].end());
  }
  Rat sum;
  for (const auto& [agent, x] : outcome.transfers) {
    ++report.checks;
    if (!winners.count(agent)) {
      report.violations.push_back({agent, "transfer for a non-winner"});
    }
    sum += x;
  }
  ++report.checks;
  if (sum != outcome.revenue) {
    report.violations.push_back(
        {AgentId("chain"), "revenue does not equal the transfer sum"});
  }
  (void)instance;
  return report;
}

AuditReport monotonicity_audit(const Mechanism& mechanism,
                               const SupplyChainInstance& instance) {
  AuditReport report;
  report.audit = "monotonicity";
  ChainOutcome truthful = mechanism(instance);
  auto index = agent_index(instance);
  for (const auto& [agent, bid] : index) {
    auto [m, amount] = bid;
    bool buyer = m == instance.goods;
    bool won = agent_wins(truthful, m, agent);
    for (const Rat& dev : deviation_grid(instance, agent)) {
      if (dev == amount) continue;
      // "Better" bids win more: higher for buyers, lower for sellers.
      // Winners are tested on better bids, losers on worse ones.
      bool better = buyer ? dev > amount : dev < amount;
      if (won != better) continue;
      ++report.checks;
      bool still = agent_wins(mechanism(instance.with_bid(agent, dev)), m,
                              agent);
      if (won && !still) {
        report.violations.push_back(
            {agent, "winner lost after improving bid to " + dev.to_string()});
      } else if (!won && still) {
        report.violations.push_back(
            {agent, "loser won after worsening bid to " + dev.to_string()});
      }
    }
  }
  return report;
}

Rat simplest_rational_in(const Rat& lo, const Rat& hi) {
  if (hi < lo) throw BadParameter("empty interval");
  // Smallest-denominator rational via continued-fraction descent; among
  // integers, prefers the one closest to zero within the interval.
  if (lo.is_negative() && !hi.is_negative()) return Rat(0);
  if (!lo.is_negative()) {
    std::int64_t c = lo.ceil();
    if (Rat(c) <= hi) return Rat(c);
    // Both endpoints in (floor(lo), floor(lo)+1).
    std::int64_t f = lo.floor();
    Rat frac = simplest_rational_in(Rat(1) / (hi - Rat(f)),
                                    Rat(1) / (lo - Rat(f)));
    return Rat(f) + Rat(1) / frac;
  }
  return -simplest_rational_in(-hi, -lo);
}

Rat critical_value(const Mechanism& mechanism,
                   const SupplyChainInstance& instance, const AgentId& agent,
                   std::int64_t max_den) {
  if (max_den < 1 || max_den > 3'000'000) {
    throw BadParameter("critical-value denominator bound out of range");
  }
  int m = instance.market_of(agent);
  if (m < 0) throw BadParameter("unknown agent '" + agent + "'");
  bool buyer = m == instance.goods;
  auto wins = [&](const Rat& bid) {
    return agent_wins(mechanism(instance.with_bid(agent, bid)), m, agent);
  };
  Rat own;
  for (const Bid& b : instance.market(m)) {
    if (b.agent == agent) own = b.amount;
  }
  if (!wins(own)) {
    throw BadParameter("agent '" + agent +
                       "' does not win truthfully; no payment to probe");
  }
  // Bracket the threshold: buyers stop winning below it, sellers above it.
  Rat win_pt = own, lose_pt;
  if (buyer) {
    lose_pt = Rat(0);
    if (wins(lose_pt)) return Rat(0);  // wins on the whole bid domain
  } else {
    Rat total(1);
    for (const Bid& b : instance.demand) total += b.amount;
    lose_pt = total;
    if (wins(lose_pt)) {
      throw NotMonotonic("seller '" + agent +
                         "' still wins at an unprofitable bid");
    }
  }
  Rat width_goal = Rat(1, max_den) / Rat(max_den);
  for (int iter = 0; iter < 400; ++iter) {
    Rat width = (win_pt - lose_pt).abs();
    if (width < width_goal) {
      Rat a = min(win_pt, lose_pt), b = max(win_pt, lose_pt);
      Rat c = simplest_rational_in(a, b);
      if (c.den() > max_den) {
        throw NotMonotonic(
            "no lattice threshold inside the probe interval; max_den too "
            "small?");
      }
      return c;
    }
    Rat mid = (win_pt + lose_pt) / Rat(2);
    if (wins(mid)) {
      win_pt = mid;
    } else {
      lose_pt = mid;
    }
  }
  throw Error("critical-value probe failed to converge");
}

AuditReport critical_value_audit(const Mechanism& mechanism,
                                 const SupplyChainInstance& instance,
                                 std::int64_t max_den) {
  AuditReport report;
  report.audit = "critical_value";
  ChainOutcome outcome = mechanism(instance);
  for (const auto& market_winners : outcome.winners) {
    for (const AgentId& w : market_winners) {
      ++report.checks;
      Rat paid = outcome.transfers.at(w).abs();
      Rat probed = critical_value(mechanism, instance, w, max_den);
      if (paid != probed) {
        report.violations.push_back(
            {w, "transfer magnitude " + paid.to_string() +
                    " differs from probed critical value " +
                    probed.to_string()});
      }
    }
  }
  return report;
}

}  // namespace chainauction
