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

#ifndef CHAINAUCTION_RULES_HPP_
#define CHAINAUCTION_RULES_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chainauction/curve.hpp"

namespace chainauction {

// The implemented double-auction rules. Throughout, l is the optimal trade
// size and S_i / B_i the i-th supply / demand curve entries.
//
//   kda              q = l, uniform price k*S_l + (1-k)*B_l. Efficient and
//                    budget-balanced but not incentive compatible; baseline
//                    for truthful-play comparisons only.
//   vcg              q = l, buyers pay max(S_l, B_{l+1}), sellers receive
//                    min(S_{l+1}, B_l). IC; runs a budget deficit.
//   trade_reduction  q = l-1, buyers pay B_l, sellers receive S_l. IC and
//                    budget-surplus; sacrifices the least valuable trade.
//   mcafee           candidate price p = (S_{l+1}+B_{l+1})/2; if p clears
//                    the l-th pair (S_l <= p <= B_l), q = l at uniform p,
//                    otherwise the trade-reduction outcome. IC, no deficit.
//   alpha_reduction  coin = 1 with probability alpha: trade-reduction
//                    outcome; coin = 0: vcg outcome. IC for every coin.
//   alpha_payment    trades the same distribution over quantities as
//                    alpha_reduction but charges the first l-1 pairs the
//                    deterministic mixed prices alpha*B_l+(1-alpha)*max(S_l,
//                    B_{l+1}) / alpha*S_l+(1-alpha)*min(S_{l+1},B_l); when
//                    coin = 0 the l-th pair also trades at the vcg prices.
//                    IC in expectation only, and discriminating.
enum class RuleId {
  kda,
  vcg,
  trade_reduction,
  mcafee,
  alpha_reduction,
  alpha_payment,
};

// A rule plus its parameter, with the rule's documented properties.
struct DaRuleSpec {
  RuleId id = RuleId::vcg;
  Rat param;  // k for kda, alpha for alpha_*; ignored otherwise

  // Truthful bidding is dominant for every coin outcome.
  bool universally_ic() const;
  // Truthful bidding is dominant at least in expectation over the coin.
  bool ic() const;
  // All winners on a side pay/receive one uniform price.
  bool non_discriminating() const;
  // Every market in a chain clears the same quantity under the symmetric
  // protocol (fails for mcafee: its accept/reject test is market-local).
  bool consistent() const;
  bool randomized() const;

  // Grammar: "kda:<k>", "vcg", "tr", "mcafee", "alphared:<alpha>",
  // "alphapay:<alpha>"; parameters are exact decimals or fractions in
  // [0, 1]. Throws BadParameter.
  static DaRuleSpec parse(const std::string& text);
  std::string name() const;
};

// The outcome of one double auction: q units trade between the first q
// sellers and first q buyers of the curves.
struct DaResult {
  int q = 0;
  std::vector<Rat> buyer_prices;   // length q, curve order
  std::vector<Rat> seller_prices;  // length q, curve order
  // Present when the realized pricing is uniform: (P_B, P_S).
  std::optional<std::pair<Rat, Rat>> uniform;
  // The realized coin for randomized rules (1 = reduction branch).
  std::optional<int> coin;

  Rat buyer_total() const;
  Rat seller_total() const;
  Rat revenue() const { return buyer_total() - seller_total(); }
};

// Applies a rule to a supply/demand curve pair. Curves may have different
// lengths (a plain double auction with unequal sides); trade size ranges
// over the shorter one and out-of-range entries act as +/-inf sentinels.
// Randomized rules require a coin (0 or 1); deterministic rules reject one.
DaResult apply_da_rule(const DaRuleSpec& rule, const PriceCurve& supply,
                       const PriceCurve& demand,
                       std::optional<int> coin = std::nullopt);

}  // namespace chainauction

#endif  // CHAINAUCTION_RULES_HPP_
