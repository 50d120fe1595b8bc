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

#include "chainauction/experiments.hpp"

#include <cmath>
#include <ostream>

#include "chainauction/random.hpp"
#include "chainauction/verify.hpp"

namespace chainauction {

BigRat to_big(const Rat& r) {
  return BigRat(r.num()) / BigRat(r.den());
}

double big_to_double(const BigRat& x) {
  return x.convert_to<double>();
}

std::string big_to_decimal(const BigRat& x, int digits) {
  using boost::multiprecision::cpp_int;
  cpp_int num = boost::multiprecision::numerator(x);
  cpp_int den = boost::multiprecision::denominator(x);
  bool neg = num < 0;
  if (neg) num = -num;
  cpp_int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  cpp_int scaled = num * scale / den;  // truncation toward zero
  cpp_int whole = scaled / scale;
  cpp_int frac = scaled % scale;
  std::string frac_str = frac.str();
  while (static_cast<int>(frac_str.size()) < digits) {
    frac_str.insert(frac_str.begin(), '0');
  }
  std::string out = neg && scaled != 0 ? "-" : "";
  out += whole.str();
  if (digits > 0) out += "." + frac_str;
  return out;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw BadParameter("experiment needs at least one run");
  if (rules.empty() && !include_alpha_star) {
    throw BadParameter("experiment has no rules");
  }
  if (dist.lattice < 1) throw BadParameter("lattice must be positive");
  if (dist.high < dist.low) throw BadParameter("empty value distribution");
  if (mode == Mode::single_da) {
    if (buyers < 1 || sellers < 1) {
      throw BadParameter("single_da mode needs buyers >= 1 and sellers >= 1");
    }
  } else {
    if (goods < 1 || market_size < 1) {
      throw BadParameter("chain mode needs goods >= 1 and market_size >= 1");
    }
  }
  if (alpha_star_samples < 2 && include_alpha_star) {
    throw BadParameter("alpha* search needs at least two samples");
  }
}

namespace {

// Stream purposes keep value draws, coins and the alpha* sample apart.
constexpr std::uint64_t kValueStream = 1;
constexpr std::uint64_t kCoinStream = 2;
constexpr std::uint64_t kAlphaStarStream = 3;

Rat draw_value(const ExperimentConfig& config, std::uint64_t purpose, int run,
               int market, int index, int rule_slot) {
  std::uint64_t slot =
      config.common_random_numbers ? 0 : static_cast<std::uint64_t>(rule_slot);
  SplitMix64 rng = substream(
      config.seed, {purpose, static_cast<std::uint64_t>(run),
                    static_cast<std::uint64_t>(market),
                    static_cast<std::uint64_t>(index), slot});
  std::int64_t k = static_cast<std::int64_t>(
      rng.bounded(static_cast<std::uint64_t>(config.dist.lattice) + 1));
  return config.dist.low +
         (config.dist.high - config.dist.low) * Rat(k, config.dist.lattice);
}

SupplyChainInstance gen_instance_with_purpose(const ExperimentConfig& config,
                                              std::uint64_t purpose, int run,
                                              int rule_slot) {
  SupplyChainInstance inst;
  if (config.mode == ExperimentConfig::Mode::single_da) {
    inst.goods = 1;
    for (int i = 1; i <= config.sellers; ++i) {
      inst.supply.push_back({default_agent_id(0, 1, i),
                             draw_value(config, purpose, run, 0, i, rule_slot)});
    }
    for (int i = 1; i <= config.buyers; ++i) {
      inst.demand.push_back({default_agent_id(1, 1, i),
                             draw_value(config, purpose, run, 1, i, rule_slot)});
    }
    return inst;
  }
  inst.goods = config.goods;
  inst.conversions.resize(config.goods - 1);
  for (int m = 0; m <= config.goods; ++m) {
    for (int i = 1; i <= config.market_size; ++i) {
      inst.market(m).push_back(
          {default_agent_id(m, config.goods, i),
           draw_value(config, purpose, run, m, i, rule_slot)});
    }
  }
  return inst;
}

// Exact efficiency and revenue of one rule application.
struct EvalPoint {
  Rat efficiency;
  Rat revenue;
};

// Plain double auction (possibly unequal sides): the rule runs directly on
// the two curves, without chain truncation, so a long side keeps its
// (l+1)-th bid as price competition.
EvalPoint eval_single_da(const DaRuleSpec& rule, const PriceCurve& S,
                         const PriceCurve& D, std::optional<int> coin) {
  DaResult res = apply_da_rule(rule, S, D, coin);
  int l = trade_quantity(S, D);
  Rat optimal, achieved;
  for (int i = 1; i <= l; ++i) optimal += D.price(i) - S.price(i);
  for (int i = 1; i <= res.q; ++i) achieved += D.price(i) - S.price(i);
  EvalPoint out;
  out.efficiency = optimal.is_zero() ? Rat(1) : achieved / optimal;
  out.revenue = res.revenue();
  return out;
}

EvalPoint eval_chain(const ExperimentConfig& config, const DaRuleSpec& rule,
                     const SupplyChainInstance& inst, std::optional<int> coin) {
  ChainRunOptions options;
  options.coin = coin;
  ChainOutcome out = run_chain(inst, rule, config.protocol, options);
  EvalPoint p;
  p.efficiency = efficiency_ratio(inst, out);
  p.revenue = out.revenue;
  return p;
}

EvalPoint eval_once(const ExperimentConfig& config, const DaRuleSpec& rule,
                    const SupplyChainInstance& inst, std::optional<int> coin) {
  if (config.mode == ExperimentConfig::Mode::single_da) {
    return eval_single_da(rule,
                          PriceCurve::from_bids(CurveKind::supply, inst.supply),
                          PriceCurve::from_bids(CurveKind::demand, inst.demand),
                          coin);
  }
  return eval_chain(config, rule, inst, coin);
}

// Per-instance metrics; randomized rules are either branch-weighted
// exactly or resolved by a per-(run, rule) coin.
struct BigPoint {
  BigRat efficiency;
  BigRat revenue;
};

BigPoint eval_rule(const ExperimentConfig& config, const DaRuleSpec& rule,
                   const SupplyChainInstance& inst, int run, int rule_slot) {
  BigPoint out;
  if (!rule.randomized()) {
    EvalPoint p = eval_once(config, rule, inst, std::nullopt);
    out.efficiency = to_big(p.efficiency);
    out.revenue = to_big(p.revenue);
    return out;
  }
  if (config.exact_expectation) {
    EvalPoint heads = eval_once(config, rule, inst, 1);
    EvalPoint tails = eval_once(config, rule, inst, 0);
    BigRat a = to_big(rule.param);
    out.efficiency = a * to_big(heads.efficiency) +
                     (BigRat(1) - a) * to_big(tails.efficiency);
    out.revenue =
        a * to_big(heads.revenue) + (BigRat(1) - a) * to_big(tails.revenue);
    return out;
  }
  SplitMix64 rng = substream(
      config.seed, {kCoinStream, static_cast<std::uint64_t>(run),
                    static_cast<std::uint64_t>(rule_slot)});
  EvalPoint p = eval_once(config, rule, inst, rng.bernoulli(rule.param));
  out.efficiency = to_big(p.efficiency);
  out.revenue = to_big(p.revenue);
  return out;
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

RuleMetrics eval_rule_over_runs(const ExperimentConfig& config,
                                const DaRuleSpec& rule, int rule_slot) {
  BigRat sum_eff = 0, sum_rev = 0;
  std::vector<double> effs, revs;
  effs.reserve(config.runs);
  revs.reserve(config.runs);
  for (int run = 0; run < config.runs; ++run) {
    SupplyChainInstance inst =
        gen_instance_with_purpose(config, kValueStream, run, rule_slot);
    BigPoint p = eval_rule(config, rule, inst, run, rule_slot);
    sum_eff += p.efficiency;
    sum_rev += p.revenue;
    effs.push_back(big_to_double(p.efficiency));
    revs.push_back(big_to_double(p.revenue));
  }
  RuleMetrics row;
  row.rule = rule.name();
  row.mean_efficiency = sum_eff / config.runs;
  row.mean_revenue = sum_rev / config.runs;
  row.sd_efficiency = sample_sd(effs);
  row.sd_revenue = sample_sd(revs);
  row.runs = config.runs;
  row.seed = config.seed;
  return row;
}

}  // namespace

SupplyChainInstance gen_experiment_instance(const ExperimentConfig& config,
                                            int run, int rule_slot) {
  config.validate();
  return gen_instance_with_purpose(config, kValueStream, run, rule_slot);
}

AlphaStarResult alpha_star_search(const ExperimentConfig& config) {
  config.validate();
  DaRuleSpec tr = DaRuleSpec::parse("tr");
  DaRuleSpec vcg = DaRuleSpec::parse("vcg");
  int samples = config.alpha_star_samples;
  // Per-instance endpoint revenues; revenue at alpha is their exact mix.
  std::vector<Rat> rev_tr(samples), rev_vcg(samples);
  BigRat sum_tr = 0, sum_vcg = 0, sum_gain = 0;
  for (int i = 0; i < samples; ++i) {
    SupplyChainInstance inst =
        gen_instance_with_purpose(config, kAlphaStarStream, i, 0);
    rev_tr[i] = eval_once(config, tr, inst, std::nullopt).revenue;
    rev_vcg[i] = eval_once(config, vcg, inst, std::nullopt).revenue;
    sum_tr += to_big(rev_tr[i]);
    sum_vcg += to_big(rev_vcg[i]);
    sum_gain += to_big(optimal_gain(inst));
  }
  BigRat mean_tr = sum_tr / samples;
  BigRat mean_vcg = sum_vcg / samples;
  if (mean_vcg > 0 || mean_tr < 0 || mean_tr == mean_vcg) {
    throw NoSignChange(
        "mean revenue does not change sign between trade reduction and vcg");
  }
  // f(alpha) = alpha*mean_tr + (1-alpha)*mean_vcg is nondecreasing with
  // f(0) <= 0 <= f(1); bisect until |f| within tolerance.
  BigRat tol = to_big(config.alpha_star_tol);
  Rat lo(0), hi(1), mid;
  BigRat f_mid;
  for (int iter = 0; iter < 40; ++iter) {
    mid = (lo + hi) / Rat(2);
    BigRat a = to_big(mid);
    f_mid = a * mean_tr + (BigRat(1) - a) * mean_vcg;
    if (boost::multiprecision::abs(f_mid) <= tol) break;
    if (f_mid < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  AlphaStarResult out;
  out.alpha = mid;
  out.mean_revenue = f_mid;
  out.mean_optimal_gain = sum_gain / samples;
  out.samples = samples;
  // Standard error of per-instance revenue at alpha*, and the induced
  // interval for alpha* itself (delta method: slope = mean_tr - mean_vcg).
  double a = mid.to_double();
  std::vector<double> at_alpha(samples);
  for (int i = 0; i < samples; ++i) {
    at_alpha[i] =
        a * rev_tr[i].to_double() + (1 - a) * rev_vcg[i].to_double();
  }
  double se = sample_sd(at_alpha) / std::sqrt(static_cast<double>(samples));
  out.se_revenue = se;
  double slope = big_to_double(mean_tr - mean_vcg);
  double half = slope > 0 ? 1.96 * se / slope : 0;
  out.ci_lo = a - half;
  out.ci_hi = a + half;
  return out;
}

std::vector<RuleMetrics> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<RuleMetrics> rows;
  for (int slot = 0; slot < static_cast<int>(config.rules.size()); ++slot) {
    rows.push_back(eval_rule_over_runs(config, config.rules[slot], slot));
  }
  return rows;
}

TradeoffTable tradeoff_table(const ExperimentConfig& config) {
  config.validate();
  TradeoffTable table;
  std::vector<DaRuleSpec> rules = config.rules;
  if (config.include_alpha_star) {
    AlphaStarResult star = alpha_star_search(config);
    DaRuleSpec star_rule;
    star_rule.id = RuleId::alpha_reduction;
    star_rule.param = star.alpha;
    rules.push_back(star_rule);
    table.alpha_star = star;
  }
  for (int slot = 0; slot < static_cast<int>(rules.size()); ++slot) {
    table.rows.push_back(eval_rule_over_runs(config, rules[slot], slot));
  }
  // Collinearity residuals against the endpoint rows, when both exist.
  const RuleMetrics* tr_row = nullptr;
  const RuleMetrics* vcg_row = nullptr;
  for (const RuleMetrics& r : table.rows) {
    if (r.rule == "tr") tr_row = &r;
    if (r.rule == "vcg") vcg_row = &r;
  }
  if (tr_row != nullptr && vcg_row != nullptr) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const DaRuleSpec& rule = rules[i];
      if (rule.id != RuleId::alpha_reduction &&
          rule.id != RuleId::alpha_payment) {
        continue;
      }
      BigRat a = to_big(rule.param);
      BigRat expect_eff = a * tr_row->mean_efficiency +
                          (BigRat(1) - a) * vcg_row->mean_efficiency;
      BigRat expect_rev =
          a * tr_row->mean_revenue + (BigRat(1) - a) * vcg_row->mean_revenue;
      BigRat res_eff =
          boost::multiprecision::abs(table.rows[i].mean_efficiency - expect_eff);
      BigRat res_rev =
          boost::multiprecision::abs(table.rows[i].mean_revenue - expect_rev);
      table.residuals.emplace_back(table.rows[i].rule,
                                   res_eff > res_rev ? res_eff : res_rev);
    }
  }
  return table;
}

void write_metrics_csv(std::ostream& os,
                       const std::vector<RuleMetrics>& rows) {
  os << "rule,mean_efficiency,sd_efficiency,mean_revenue,sd_revenue,runs,"
        "seed\n";
  char buf[64];
  for (const RuleMetrics& r : rows) {
    os << r.rule << ',' << big_to_decimal(r.mean_efficiency, 9) << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.sd_efficiency);
    os << buf << ',' << big_to_decimal(r.mean_revenue, 9) << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.sd_revenue);
    os << buf << ',' << r.runs << ',' << r.seed << '\n';
  }
}

void write_gnuplot_script(std::ostream& os, const std::string& csv_path) {
  os << "set datafile separator ','\n"
     << "set key outside\n"
     << "set xlabel 'mean revenue'\n"
     << "set ylabel 'mean efficiency'\n"
     << "plot '" << csv_path
     << "' using 4:2:1 skip 1 with labels point pt 7 offset char 1,0.5 "
        "notitle\n";
}

}  // namespace chainauction
