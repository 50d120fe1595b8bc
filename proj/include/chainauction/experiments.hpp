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

#ifndef CHAINAUCTION_EXPERIMENTS_HPP_
#define CHAINAUCTION_EXPERIMENTS_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chainauction/chain.hpp"
#include "chainauction/rules.hpp"

namespace chainauction {

// Arbitrary-precision rationals for aggregation. Per-instance metrics are
// plain Rat, but means over hundreds of instances have unbounded
// denominators, so accumulation is exact in cpp_rational and only display
// and standard deviations round to double.
using BigRat = boost::multiprecision::cpp_rational;

BigRat to_big(const Rat& r);
double big_to_double(const BigRat& x);
// Fixed-point decimal rendering with `digits` fractional digits
// (truncated toward zero); deterministic across platforms.
std::string big_to_decimal(const BigRat& x, int digits);

// Bid values are drawn uniformly from the lattice
//   { low + (high - low) * k / lattice : k = 0..lattice },
// so every generated value is an exact rational.
struct ValueDistribution {
  Rat low = Rat(0);
  Rat high = Rat(1);
  std::int64_t lattice = 1000;
};

struct ExperimentConfig {
  enum class Mode { single_da, chain };

  Mode mode = Mode::single_da;
  // single_da mode: market sizes of the one buyer and one seller market.
  int buyers = 25;
  int sellers = 25;
  // chain mode: t goods, every market with the same size.
  int goods = 2;
  int market_size = 10;
  ValueDistribution dist;
  int runs = 100;
  std::uint64_t seed = 1;
  std::vector<DaRuleSpec> rules;
  // Append an "alphared:<alpha*>" row, with alpha* found by bisection on
  // a dedicated sample of instances.
  bool include_alpha_star = false;
  int alpha_star_samples = 10000;
  Rat alpha_star_tol = Rat(1, 1000000);
  // Randomized rules: evaluate both coin branches and weight them by
  // (alpha, 1-alpha) exactly instead of flipping a coin per run.
  bool exact_expectation = true;
  // Reuse identical instances across rules (variance reduction); when
  // false every rule gets its own instance stream.
  bool common_random_numbers = true;
  // chain mode only.
  ProtocolKind protocol = ProtocolKind::pivot;

  void validate() const;
};

// The instance for one run. rule_slot feeds the stream key only when
// common_random_numbers is off.
SupplyChainInstance gen_experiment_instance(const ExperimentConfig& config,
                                            int run, int rule_slot = 0);

struct RuleMetrics {
  std::string rule;
  BigRat mean_efficiency;
  BigRat mean_revenue;
  double sd_efficiency = 0;
  double sd_revenue = 0;
  int runs = 0;
  std::uint64_t seed = 0;
};

struct AlphaStarResult {
  Rat alpha;
  BigRat mean_revenue;      // at alpha, over the search sample
  BigRat mean_optimal_gain;  // over the search sample
  double se_revenue = 0;     // standard error of per-instance revenue
  double ci_lo = 0, ci_hi = 0;  // 95% interval for alpha* (delta method)
  int samples = 0;
};

// Finds alpha with mean revenue ~ 0 by bisection over [0, 1]: revenue is
// linear in alpha between the trade-reduction endpoint (surplus) and the
// vcg endpoint (deficit). Throws NoSignChange if the means do not bracket
// zero with positive spread.
AlphaStarResult alpha_star_search(const ExperimentConfig& config);

// One metrics row per configured rule, in order.
std::vector<RuleMetrics> run_experiment(const ExperimentConfig& config);

struct TradeoffTable {
  std::vector<RuleMetrics> rows;
  std::optional<AlphaStarResult> alpha_star;
  // Exact collinearity residuals: for every alphared:a / alphapay:a row,
  // the largest |row - (a * tr_row + (1-a) * vcg_row)| over the mean
  // efficiency and mean revenue columns. Zero in exact mode.
  std::vector<std::pair<std::string, BigRat>> residuals;
};

// run_experiment plus the alpha* row (when configured) and the residual
// diagnostics against the tr/vcg endpoints.
TradeoffTable tradeoff_table(const ExperimentConfig& config);

// CSV schema: rule,mean_efficiency,sd_efficiency,mean_revenue,sd_revenue,
// runs,seed. Means as exact-truncated decimals (9 fractional digits).
void write_metrics_csv(std::ostream& os, const std::vector<RuleMetrics>& rows);

// A gnuplot script plotting mean revenue against mean efficiency from the
// CSV written by write_metrics_csv.
void write_gnuplot_script(std::ostream& os, const std::string& csv_path);

}  // namespace chainauction

#endif  // CHAINAUCTION_EXPERIMENTS_HPP_
