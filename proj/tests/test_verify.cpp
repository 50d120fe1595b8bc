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

#include <algorithm>
#include <string>
#include <vector>

#include <doctest.h>

#include "chainauction/chain.hpp"
#include "chainauction/errors.hpp"
#include "chainauction/instance.hpp"
#include "chainauction/random.hpp"
#include "chainauction/rules.hpp"
#include "chainauction/verify.hpp"

namespace chainauction {
namespace {

SupplyChainInstance lemonade() {
  SupplyChainInstance inst;
  inst.goods = 2;
  inst.supply = {{"alice", Rat(3)}, {"ann", Rat(6)}, {"abe", Rat(7)}};
  inst.conversions = {{{"bob", Rat(1)}, {"barb", Rat(3)}, {"boris", Rat(6)}}};
  inst.demand = {{"chris", Rat(12)}, {"carol", Rat(11)}, {"cindy", Rat(7)}};
  return inst;
}

// Equal market sizes: the audited setting, where truncation never drops
// anyone and the incentive theorems apply without carve-outs.
SupplyChainInstance random_equal_instance(SplitMix64& rng, int max_goods,
                                          int max_size) {
  SupplyChainInstance inst;
  inst.goods = 1 + static_cast<int>(rng.bounded(max_goods));
  int size = 1 + static_cast<int>(rng.bounded(max_size));
  auto fill = [&](int market) {
    std::vector<Bid> bids;
    for (int i = 1; i <= size; ++i) {
      bids.push_back({default_agent_id(market, inst.goods, i),
                      Rat(static_cast<std::int64_t>(rng.bounded(60)), 4)});
    }
    return bids;
  };
  inst.supply = fill(0);
  for (int r = 1; r < inst.goods; ++r) inst.conversions.push_back(fill(r));
  inst.demand = fill(inst.goods);
  return inst;
}

SupplyChainInstance random_unequal_instance(SplitMix64& rng, int max_goods,
                                            int max_size) {
  SupplyChainInstance inst;
  inst.goods = 1 + static_cast<int>(rng.bounded(max_goods));
  auto fill = [&](int market) {
    int size = 1 + static_cast<int>(rng.bounded(max_size));
    std::vector<Bid> bids;
    for (int i = 1; i <= size; ++i) {
      bids.push_back({default_agent_id(market, inst.goods, i),
                      Rat(static_cast<std::int64_t>(rng.bounded(60)), 4)});
    }
    return bids;
  };
  inst.supply = fill(0);
  for (int r = 1; r < inst.goods; ++r) inst.conversions.push_back(fill(r));
  inst.demand = fill(inst.goods);
  return inst;
}

TEST_CASE("optimal gain matches the subset-enumeration oracle") {
  CHECK(optimal_gain(lemonade()) == Rat(10));
  CHECK(optimal_gain_enumeration(lemonade()) == Rat(10));

  SplitMix64 rng(5150);
  for (int trial = 0; trial < 60; ++trial) {
    SupplyChainInstance inst = trial % 2 == 0
                                   ? random_equal_instance(rng, 3, 6)
                                   : random_unequal_instance(rng, 3, 6);
    CAPTURE(trial);
    CHECK(optimal_gain(inst) == optimal_gain_enumeration(inst));
  }
}

TEST_CASE("achieved gain and efficiency ratio") {
  SupplyChainInstance inst = lemonade();
  Mechanism vcg = make_mechanism(DaRuleSpec::parse("vcg"),
                                 ProtocolKind::symmetric);
  ChainOutcome full = vcg(inst);
  CHECK(achieved_gain(inst, full) == Rat(10));
  CHECK(efficiency_ratio(inst, full) == Rat(1));

  Mechanism tr = make_mechanism(DaRuleSpec::parse("tr"),
                                ProtocolKind::symmetric);
  ChainOutcome reduced = tr(inst);
  CHECK(achieved_gain(inst, reduced) == Rat(8));  // 12 - 1 - 3
  CHECK(efficiency_ratio(inst, reduced) == Rat(4, 5));

  // A book that cannot trade has optimal gain zero and ratio one.
  SupplyChainInstance none;
  none.goods = 1;
  none.supply = {{"s1", Rat(9)}};
  none.demand = {{"d1", Rat(2)}};
  CHECK(optimal_gain(none) == Rat(0));
  CHECK(efficiency_ratio(none, vcg(none)) == Rat(1));
}

TEST_CASE("deviation grid brackets and separates the market's bid values") {
  SupplyChainInstance inst = lemonade();
  std::vector<Rat> grid = deviation_grid(inst, "ann");
  // Supply market values {3, 6, 7}: below, between, above.
  CHECK(grid == std::vector<Rat>{Rat(2), Rat(9, 2), Rat(13, 2), Rat(8)});
  // The grid never collides with an existing bid, so audits are never
  // decided by tie-breaking.
  for (const Rat& g : grid) {
    for (const Bid& b : inst.supply) CHECK(g != b.amount);
  }

  SupplyChainInstance low;
  low.goods = 1;
  low.supply = {{"s1", Rat(0)}, {"s2", Rat(1)}};
  low.demand = {{"d1", Rat(5)}, {"d2", Rat(3)}};
  // The low extreme clamps to zero (bids are non-negative).
  CHECK(deviation_grid(low, "s1") ==
        std::vector<Rat>{Rat(0), Rat(1, 2), Rat(2)});
}

TEST_CASE("truthful rules survive the ic audit on random chains") {
  SplitMix64 rng(6001);
  std::vector<std::pair<DaRuleSpec, std::optional<int>>> cases = {
      {DaRuleSpec::parse("vcg"), std::nullopt},
      {DaRuleSpec::parse("tr"), std::nullopt},
      {DaRuleSpec::parse("alphared:0.5"), 0},
      {DaRuleSpec::parse("alphared:0.5"), 1},
  };
  for (int trial = 0; trial < 12; ++trial) {
    SupplyChainInstance inst = random_equal_instance(rng, 3, 5);
    for (const auto& [rule, coin] : cases) {
      for (ProtocolKind protocol :
           {ProtocolKind::symmetric, ProtocolKind::pivot}) {
        CAPTURE(trial);
        CAPTURE(rule.name());
        AuditReport report =
            ic_audit(make_mechanism(rule, protocol, coin), inst);
        CHECK(report.ok());
        CHECK(report.checks > 0);
      }
    }
    // McAfee only commits under the pivot protocols.
    AuditReport mcafee = ic_audit(
        make_mechanism(DaRuleSpec::parse("mcafee"), ProtocolKind::pivot),
        inst);
    CHECK(mcafee.ok());
  }
}

TEST_CASE("kda fails the ic audit: underbidding moves the clearing price") {
  SupplyChainInstance inst;
  inst.goods = 1;
  inst.supply = {{"s1", Rat(0)}};
  inst.demand = {{"d1", Rat(10)}};
  Mechanism kda = make_mechanism(DaRuleSpec::parse("kda:0.5"),
                                 ProtocolKind::symmetric, std::nullopt,
                                 /*allow_non_ic=*/true);
  AuditReport report = ic_audit(kda, inst);
  CHECK(!report.ok());
  // The buyer profits from shading: bidding 9 still wins but pays 4.5
  // instead of 5.
  bool buyer_flagged = false;
  for (const AuditViolation& v : report.violations) {
    buyer_flagged = buyer_flagged || v.agent == "d1";
  }
  CHECK(buyer_flagged);
}

TEST_CASE("alpha payment: each coin branch is gameable, the mix is not") {
  // S = [1,2,10], D = [9,8,7]: l = 2. Under coin=0 the marginal seller
  // trades at vcg prices, so the cheapest seller can pretend to be
  // marginal: bidding 6 turns a 5 receipt into min(10,8) = 8.
  SupplyChainInstance inst;
  inst.goods = 1;
  inst.supply = {{"s1", Rat(1)}, {"s2", Rat(2)}, {"s3", Rat(10)}};
  inst.demand = {{"d1", Rat(9)}, {"d2", Rat(8)}, {"d3", Rat(7)}};
  DaRuleSpec apay = DaRuleSpec::parse("alphapay:0.5");

  AuditReport tails =
      ic_audit(make_mechanism(apay, ProtocolKind::symmetric, 0), inst);
  CHECK(!tails.ok());
  bool seller_flagged = false;
  for (const AuditViolation& v : tails.violations) {
    seller_flagged = seller_flagged || v.agent == "s1";
  }
  CHECK(seller_flagged);

  // In expectation over the coin the deviation is exactly neutralized.
  AuditReport mixed =
      ic_audit_expected(apay, ProtocolKind::symmetric, inst);
  CHECK(mixed.ok());
  CHECK(mixed.checks > 0);

  // Universally truthful rules pass branch by branch, not just on average.
  AuditReport ared_tails = ic_audit(
      make_mechanism(DaRuleSpec::parse("alphared:0.5"),
                     ProtocolKind::symmetric, 0),
      inst);
  CHECK(ared_tails.ok());
}

TEST_CASE("ir, nd and balance audits on committed outcomes") {
  SplitMix64 rng(7007);
  for (int trial = 0; trial < 15; ++trial) {
    SupplyChainInstance inst = random_equal_instance(rng, 3, 6);
    for (const char* rule_text : {"vcg", "tr"}) {
      DaRuleSpec rule = DaRuleSpec::parse(rule_text);
      for (ProtocolKind protocol :
           {ProtocolKind::symmetric, ProtocolKind::pivot,
            ProtocolKind::pivot_logn}) {
        ChainOutcome out = run_chain(inst, rule, protocol);
        CAPTURE(trial);
        CAPTURE(rule_text);
        CHECK(ir_audit(inst, out).ok());
        CHECK(nd_audit(inst, out).ok());
        CHECK(balance_audit(inst, out).ok());
      }
    }
  }

  // The discriminating rule trips the uniform-price audit.
  SupplyChainInstance demo;
  demo.goods = 1;
  demo.supply = {{"s1", Rat(1)}, {"s2", Rat(2)}, {"s3", Rat(10)}};
  demo.demand = {{"d1", Rat(9)}, {"d2", Rat(8)}, {"d3", Rat(7)}};
  ChainOutcome apay_out =
      run_chain(demo, DaRuleSpec::parse("alphapay:0.5"),
                ProtocolKind::symmetric, [] {
                  ChainRunOptions o;
                  o.coin = 0;
                  return o;
                }());
  CHECK(ir_audit(demo, apay_out).ok());       // still individually rational
  CHECK(balance_audit(demo, apay_out).ok());  // and materially balanced
  CHECK(!nd_audit(demo, apay_out).ok());      // but two prices per side
}

TEST_CASE("monotonicity audit holds for every implemented rule") {
  SplitMix64 rng(8111);
  for (int trial = 0; trial < 8; ++trial) {
    SupplyChainInstance inst = random_equal_instance(rng, 2, 5);
    std::vector<std::pair<const char*, std::optional<int>>> cases = {
        {"vcg", std::nullopt},
        {"tr", std::nullopt},
        {"kda:0.5", std::nullopt},
        {"alphared:0.5", 1},
        {"alphapay:0.5", 0},
    };
    for (const auto& [text, coin] : cases) {
      DaRuleSpec rule = DaRuleSpec::parse(text);
      Mechanism mech = make_mechanism(rule, ProtocolKind::symmetric, coin,
                                      /*allow_non_ic=*/true);
      CAPTURE(trial);
      CAPTURE(text);
      CHECK(monotonicity_audit(mech, inst).ok());
    }
  }
}

TEST_CASE("simplest_rational_in finds the minimal-denominator witness") {
  CHECK(simplest_rational_in(Rat(3, 10), Rat(34, 100)) == Rat(1, 3));
  CHECK(simplest_rational_in(Rat(2), Rat(3)) == Rat(2));
  CHECK(simplest_rational_in(Rat(1, 5), Rat(1, 4)) == Rat(1, 4));
  CHECK(simplest_rational_in(Rat(-34, 100), Rat(-3, 10)) == Rat(-1, 3));
  CHECK(simplest_rational_in(Rat(-1, 2), Rat(1, 3)) == Rat(0));
  CHECK(simplest_rational_in(Rat(5, 7), Rat(5, 7)) == Rat(5, 7));
  CHECK(simplest_rational_in(Rat(7, 2), Rat(9, 2)) == Rat(4));
  // A tight bracket around a specific value recovers exactly that value.
  Rat target(355, 113);
  Rat eps(1, 100000000);
  CHECK(simplest_rational_in(target - eps, target + eps) == target);
  CHECK_THROWS_AS(simplest_rational_in(Rat(1), Rat(0)), BadParameter);
}

TEST_CASE("critical values equal vcg payments on the worked example") {
  SupplyChainInstance inst = lemonade();
  Mechanism vcg = make_mechanism(DaRuleSpec::parse("vcg"),
                                 ProtocolKind::symmetric);
  CHECK(critical_value(vcg, inst, "chris", 64) == Rat(9));
  CHECK(critical_value(vcg, inst, "carol", 64) == Rat(9));
  CHECK(critical_value(vcg, inst, "alice", 64) == Rat(7));
  CHECK(critical_value(vcg, inst, "bob", 64) == Rat(5));
  CHECK_THROWS_AS(critical_value(vcg, inst, "abe", 64), BadParameter);  // loser
  CHECK_THROWS_AS(critical_value(vcg, inst, "nobody", 64), BadParameter);
  CHECK_THROWS_AS(critical_value(vcg, inst, "chris", 0), BadParameter);

  AuditReport audit = critical_value_audit(vcg, inst, 64);
  CHECK(audit.ok());
  CHECK(audit.checks == 6);
}

TEST_CASE("payment equals critical value for truthful rules, not for kda") {
  SplitMix64 rng(9311);
  for (int trial = 0; trial < 6; ++trial) {
    SupplyChainInstance inst = random_equal_instance(rng, 2, 4);
    for (ProtocolKind protocol :
         {ProtocolKind::symmetric, ProtocolKind::pivot}) {
      CAPTURE(trial);
      CHECK(critical_value_audit(
                make_mechanism(DaRuleSpec::parse("vcg"), protocol), inst, 64)
                .ok());
      CHECK(critical_value_audit(
                make_mechanism(DaRuleSpec::parse("tr"), protocol), inst, 64)
                .ok());
    }
    CHECK(critical_value_audit(
              make_mechanism(DaRuleSpec::parse("mcafee"), ProtocolKind::pivot),
              inst, 64)
              .ok());
  }

  // kda pays the convex combination, not the dropout threshold.
  SupplyChainInstance demo;
  demo.goods = 1;
  demo.supply = {{"s1", Rat(2)}};
  demo.demand = {{"d1", Rat(10)}};
  Mechanism kda = make_mechanism(DaRuleSpec::parse("kda:0.5"),
                                 ProtocolKind::symmetric, std::nullopt,
                                 /*allow_non_ic=*/true);
  AuditReport audit = critical_value_audit(kda, demo, 64);
  CHECK(!audit.ok());  // pays 6, but the dropout threshold is 2 / 10
}

TEST_CASE("efficiency bounds: vcg exact, reduction rules lose one trade") {
  SplitMix64 rng(1061);
  for (int trial = 0; trial < 40; ++trial) {
    SupplyChainInstance inst = random_equal_instance(rng, 3, 8);
    ChainCurves cc = aggregate_chain_curves(inst);
    int l = optimal_trade_size(cc.top_supply(), cc.top_demand());
    Rat bound = l >= 1 ? Rat(l - 1) / Rat(l) : Rat(0);
    CAPTURE(trial);

    CHECK(efficiency_ratio(
              inst, run_chain(inst, DaRuleSpec::parse("vcg"),
                              ProtocolKind::pivot)) == Rat(1));
    for (const char* text : {"tr", "mcafee"}) {
      Rat ratio = efficiency_ratio(
          inst, run_chain(inst, DaRuleSpec::parse(text), ProtocolKind::pivot));
      CHECK(ratio >= bound);
      CHECK(ratio <= Rat(1));
    }
    for (int coin : {0, 1}) {
      ChainRunOptions options;
      options.coin = coin;
      Rat ratio = efficiency_ratio(
          inst, run_chain(inst, DaRuleSpec::parse("alphared:0.5"),
                          ProtocolKind::pivot, options));
      CHECK(ratio >= bound);
    }
  }
}

TEST_CASE("make_mechanism pins the coin for randomized rules") {
  CHECK_THROWS_AS(
      make_mechanism(DaRuleSpec::parse("alphared:0.5"), ProtocolKind::pivot),
      RuleNotProbeFriendly);
  CHECK_NOTHROW(make_mechanism(DaRuleSpec::parse("alphared:0.5"),
                               ProtocolKind::pivot, 1));
  CHECK_NOTHROW(make_mechanism(DaRuleSpec::parse("vcg"), ProtocolKind::pivot));
}

}  // namespace
}  // namespace chainauction
