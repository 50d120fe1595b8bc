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

#include "chainauction/rules.hpp"

#include <algorithm>

namespace chainauction {

bool DaRuleSpec::universally_ic() const {
  switch (id) {
    case RuleId::vcg:
    case RuleId::trade_reduction:
    case RuleId::mcafee:
    case RuleId::alpha_reduction:
      return true;
    default:
      return false;
  }
}

bool DaRuleSpec::ic() const {
  return universally_ic() || id == RuleId::alpha_payment;
}

bool DaRuleSpec::non_discriminating() const {
  return id != RuleId::alpha_payment;
}

bool DaRuleSpec::consistent() const { return id != RuleId::mcafee; }

bool DaRuleSpec::randomized() const {
  return id == RuleId::alpha_reduction || id == RuleId::alpha_payment;
}

DaRuleSpec DaRuleSpec::parse(const std::string& text) {
  std::string name = text;
  std::optional<std::string> param_text;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    param_text = text.substr(colon + 1);
  }
  DaRuleSpec spec;
  bool needs_param = false;
  if (name == "kda") {
    spec.id = RuleId::kda;
    needs_param = true;
  } else if (name == "vcg") {
    spec.id = RuleId::vcg;
  } else if (name == "tr") {
    spec.id = RuleId::trade_reduction;
  } else if (name == "mcafee") {
    spec.id = RuleId::mcafee;
  } else if (name == "alphared") {
    spec.id = RuleId::alpha_reduction;
    needs_param = true;
  } else if (name == "alphapay") {
    spec.id = RuleId::alpha_payment;
    needs_param = true;
  } else {
    throw BadParameter("unknown rule '" + text + "'");
  }
  if (needs_param != param_text.has_value()) {
    throw BadParameter(needs_param
                           ? "rule '" + name + "' requires a parameter"
                           : "rule '" + name + "' takes no parameter");
  }
  if (param_text.has_value()) {
    Rat p;
    try {
      p = Rat::parse(*param_text);
    } catch (const Error& e) {
      throw BadParameter("bad parameter for rule '" + name +
                         "': " + e.what());
    }
    if (p.is_negative() || p > Rat(1)) {
      throw BadParameter("parameter for rule '" + name +
                         "' must lie in [0, 1]");
    }
    spec.param = p;
  }
  return spec;
}

std::string DaRuleSpec::name() const {
  switch (id) {
    case RuleId::kda:
      return "kda:" + param.to_string();
    case RuleId::vcg:
      return "vcg";
    case RuleId::trade_reduction:
      return "tr";
    case RuleId::mcafee:
      return "mcafee";
    case RuleId::alpha_reduction:
      return "alphared:" + param.to_string();
    case RuleId::alpha_payment:
      return "alphapay:" + param.to_string();
  }
  throw BadParameter("unknown rule id");
}

Rat DaResult::buyer_total() const {
  Rat sum;
  for (const Rat& p : buyer_prices) sum += p;
  return sum;
}

Rat DaResult::seller_total() const {
  Rat sum;
  for (const Rat& p : seller_prices) sum += p;
  return sum;
}

namespace {

DaResult uniform_result(int q, const Rat& pb, const Rat& ps) {
  DaResult r;
  r.q = q;
  if (q > 0) {
    r.buyer_prices.assign(q, pb);
    r.seller_prices.assign(q, ps);
    r.uniform = std::make_pair(pb, ps);
  }
  return r;
}

// VCG threshold prices at trade size l >= 1: each side pays/receives the
// critical bid at which it would drop out of the efficient trade.
Rat vcg_buyer_price(const PriceCurve& S, const PriceCurve& D, int l) {
  return max_finite(S.price(l), D.price_ext(l + 1));
}
Rat vcg_seller_price(const PriceCurve& S, const PriceCurve& D, int l) {
  return min_finite(D.price(l), S.price_ext(l + 1));
}

DaResult run_kda(const PriceCurve& S, const PriceCurve& D, int l,
                 const Rat& k) {
  if (l == 0) return DaResult{};
  Rat p = k * S.price(l) + (Rat(1) - k) * D.price(l);
  return uniform_result(l, p, p);
}

DaResult run_vcg(const PriceCurve& S, const PriceCurve& D, int l) {
  if (l == 0) return DaResult{};
  return uniform_result(l, vcg_buyer_price(S, D, l),
                        vcg_seller_price(S, D, l));
}

DaResult run_trade_reduction(const PriceCurve& S, const PriceCurve& D,
                             int l) {
  if (l <= 1) return DaResult{};
  // The reduced l-th pair's bids price the remaining l-1 trades.
  return uniform_result(l - 1, D.price(l), S.price(l));
}

DaResult run_mcafee(const PriceCurve& S, const PriceCurve& D, int l) {
  if (l == 0) return DaResult{};
  // The candidate price needs the (l+1)-th bid on both sides; at the curve
  // end (sentinels would make it undefined) fall back to trade reduction.
  if (l + 1 <= S.size() && l + 1 <= D.size()) {
    Rat p = (S.price(l + 1) + D.price(l + 1)) / Rat(2);
    if (S.price(l) <= p && p <= D.price(l)) {
      return uniform_result(l, p, p);
    }
  }
  return run_trade_reduction(S, D, l);
}

DaResult run_alpha_reduction(const PriceCurve& S, const PriceCurve& D, int l,
                             int coin) {
  DaResult r = coin == 1 ? run_trade_reduction(S, D, l) : run_vcg(S, D, l);
  r.coin = coin;
  return r;
}

DaResult run_alpha_payment(const PriceCurve& S, const PriceCurve& D, int l,
                           const Rat& alpha, int coin) {
  DaResult r;
  r.coin = coin;
  if (l == 0) return r;
  Rat pb_vcg = vcg_buyer_price(S, D, l);
  Rat ps_vcg = vcg_seller_price(S, D, l);
  // Deterministic mixed prices for the first l-1 pairs: the expectation of
  // the alpha_reduction payment over the coin.
  Rat mixed_b = alpha * D.price(l) + (Rat(1) - alpha) * pb_vcg;
  Rat mixed_s = alpha * S.price(l) + (Rat(1) - alpha) * ps_vcg;
  r.q = coin == 1 ? l - 1 : l;
  r.buyer_prices.assign(std::max(l - 1, 0), mixed_b);
  r.seller_prices.assign(std::max(l - 1, 0), mixed_s);
  if (coin == 0) {
    // The l-th unit trades too, at the vcg threshold prices.
    r.buyer_prices.push_back(pb_vcg);
    r.seller_prices.push_back(ps_vcg);
  }
  // Report a uniform price pair only if the realized vectors are constant.
  if (r.q > 0) {
    bool flat = true;
    for (const Rat& p : r.buyer_prices) flat = flat && p == r.buyer_prices[0];
    for (const Rat& p : r.seller_prices) {
      flat = flat && p == r.seller_prices[0];
    }
    if (flat) r.uniform = std::make_pair(r.buyer_prices[0], r.seller_prices[0]);
  }
  return r;
}

}  // namespace

DaResult apply_da_rule(const DaRuleSpec& rule, const PriceCurve& supply,
                       const PriceCurve& demand, std::optional<int> coin) {
  if (supply.kind() != CurveKind::supply ||
      demand.kind() != CurveKind::demand) {
    throw BadParameter("apply_da_rule takes (supply, demand)");
  }
  if (supply.size() == 0 || demand.size() == 0) {
    throw EmptyMarket("double auction with an empty side");
  }
  if (rule.param.is_negative() || rule.param > Rat(1)) {
    throw BadParameter("rule parameter must lie in [0, 1]");
  }
  if (rule.randomized()) {
    if (!coin.has_value() || (*coin != 0 && *coin != 1)) {
      throw BadParameter("rule '" + rule.name() + "' needs a coin in {0,1}");
    }
  } else if (coin.has_value()) {
    throw BadParameter("rule '" + rule.name() + "' is deterministic");
  }
  int l = trade_quantity(supply, demand);
  switch (rule.id) {
    case RuleId::kda:
      return run_kda(supply, demand, l, rule.param);
    case RuleId::vcg:
      return run_vcg(supply, demand, l);
    case RuleId::trade_reduction:
      return run_trade_reduction(supply, demand, l);
    case RuleId::mcafee:
      return run_mcafee(supply, demand, l);
    case RuleId::alpha_reduction:
      return run_alpha_reduction(supply, demand, l, *coin);
    case RuleId::alpha_payment:
      return run_alpha_payment(supply, demand, l, rule.param, *coin);
  }
  throw BadParameter("unknown rule id");
}

}  // namespace chainauction
