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
//
// chainauction: double auctions and supply-chain auction protocols.
//
// Subcommands:
//   auction     one double auction rule on a single-good instance
//   chain       a distributed protocol over a multi-market instance
//   verify      the audit battery (incentives, prices, balance) on a rule
//   experiment  Monte-Carlo efficiency/revenue tables from a config file
//
// Exit codes: 0 success, 1 internal error, 2 input parse error,
// 3 invalid parameter or rule/protocol mismatch, 4 inconsistent clearing
// quantities, 5 unexpected audit violation.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chainauction/chain.hpp"
#include "chainauction/curve.hpp"
#include "chainauction/errors.hpp"
#include "chainauction/experiments.hpp"
#include "chainauction/instance.hpp"
#include "chainauction/json_io.hpp"
#include "chainauction/rules.hpp"
#include "chainauction/verify.hpp"

namespace {

using namespace chainauction;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitParameter = 3;
constexpr int kExitInconsistent = 4;
constexpr int kExitAudit = 5;

// Relative output paths land in $CHAINAUCTION_OUTDIR when it is set.
std::string resolve_out_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* outdir = std::getenv("CHAINAUCTION_OUTDIR");
  if (outdir == nullptr || *outdir == '\0') return path;
  std::string dir = outdir;
  if (dir.back() != '/') dir += '/';
  return dir + path;
}

// Without --seed, randomness still has to be replayable: draw a seed once
// and tell the user what it was.
std::uint64_t ensure_seed(std::optional<std::uint64_t>& seed) {
  if (!seed.has_value()) {
    std::random_device rd;
    std::uint64_t fresh =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    std::cerr << "seed: " << fresh << " (chosen at random; pass --seed "
              << fresh << " to replay)\n";
    seed = fresh;
  }
  return *seed;
}

void emit(const std::string& text, const std::string& output_path) {
  std::cout << text;
  if (!output_path.empty()) {
    write_file(resolve_out_path(output_path), text);
  }
}

struct AuctionArgs {
  std::string input;
  std::string rule;
  std::string output;
  std::optional<int> coin;
  std::optional<std::uint64_t> seed;
};

int cmd_auction(const AuctionArgs& args) {
  DaRuleSpec rule = DaRuleSpec::parse(args.rule);
  SupplyChainInstance instance = load_instance_file(args.input);
  if (instance.goods != 1) {
    throw BadParameter(
        "'auction' runs a single double auction; this instance has " +
        std::to_string(instance.goods) + " goods, use 'chain'");
  }
  instance.validate();
  std::optional<int> coin = args.coin;
  if (rule.randomized() && !coin.has_value()) {
    std::optional<std::uint64_t> seed = args.seed;
    coin = draw_shared_coin(rule, ensure_seed(seed));
  }
  PriceCurve supply = PriceCurve::from_bids(CurveKind::supply, instance.market(0));
  PriceCurve demand = PriceCurve::from_bids(CurveKind::demand, instance.market(1));
  DaResult result = apply_da_rule(rule, supply, demand, coin);
  emit(da_result_to_json(rule, supply, demand, result), args.output);
  return kExitOk;
}

struct ChainArgs {
  std::string input;
  std::string rule;
  std::string protocol = "symmetric";
  std::string output;
  std::string trace;
  std::optional<int> coin;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> scheduler_seed;
  bool allow_non_ic = false;
};

int cmd_chain(const ChainArgs& args) {
  DaRuleSpec rule = DaRuleSpec::parse(args.rule);
  ProtocolKind protocol = parse_protocol(args.protocol);
  SupplyChainInstance instance = load_instance_file(args.input);

  ChainRunOptions options;
  options.coin = args.coin;
  options.seed = args.seed;
  options.allow_non_ic = args.allow_non_ic;
  options.scheduler_seed = args.scheduler_seed;
  if (rule.randomized() && !options.coin.has_value() &&
      !options.seed.has_value()) {
    std::optional<std::uint64_t> seed;
    options.seed = ensure_seed(seed);
  }

  ChainOutcome outcome = run_chain(instance, rule, protocol, options);
  emit(outcome_to_json(rule, protocol, outcome), args.output);
  if (!args.trace.empty()) {
    std::ostringstream os;
    outcome.trace.to_csv(os);
    write_file(resolve_out_path(args.trace), os.str());
  }
  if (!outcome.consistent) {
    std::cerr << "inconsistent clearing quantities across markets\n";
    return kExitInconsistent;
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string input;
  std::string rule;
  std::string protocol = "symmetric";
  std::string output;
};

// The largest denominator a critical value can have on this instance:
// thresholds are bids, maxima/minima of bids, or half-sums of two bids.
std::int64_t probe_denominator_bound(const SupplyChainInstance& instance) {
  __int128 bound = 1;
  for (int m = 0; m <= instance.goods; ++m) {
    for (const Bid& b : instance.market(m)) {
      __int128 d = b.amount.den();
      if (d > bound) bound = d;
    }
  }
  bound = 2 * bound * bound;
  const __int128 cap = 3000000;
  return static_cast<std::int64_t>(bound > cap ? cap + 1 : bound);
}

// One audited realization of the rule: deterministic rules have a single
// branch, randomized rules one per coin.
struct AuditBranch {
  std::optional<int> coin;
  std::string note;
  Mechanism mechanism;
  ChainOutcome outcome;
};

int cmd_verify(const VerifyArgs& args) {
  DaRuleSpec rule = DaRuleSpec::parse(args.rule);
  ProtocolKind protocol = parse_protocol(args.protocol);
  SupplyChainInstance instance = load_instance_file(args.input);
  instance.validate();
  const bool allow = !rule.ic();  // auditing kda is the point, let it run

  std::vector<AuditBranch> branches;
  if (rule.randomized()) {
    for (int coin : {1, 0}) {
      branches.push_back(
          {coin, "coin=" + std::to_string(coin),
           make_mechanism(rule, protocol, coin, allow), ChainOutcome{}});
    }
  } else {
    branches.push_back(
        {std::nullopt, "", make_mechanism(rule, protocol, std::nullopt, allow),
         ChainOutcome{}});
  }
  for (AuditBranch& b : branches) {
    b.outcome = b.mechanism(instance);
    if (!b.outcome.consistent) {
      std::cerr << "rule '" << rule.name() << "' clears inconsistently on "
                << "this instance; nothing to audit\n";
      return kExitInconsistent;
    }
  }

  std::vector<AuditEntry> entries;
  auto push = [&entries](AuditReport report, bool expected_ok,
                         const std::string& note) {
    entries.push_back({std::move(report), expected_ok, false, note});
  };

  for (const AuditBranch& b : branches) {
    // Truthfulness per realized branch is exactly universal truthfulness:
    // alpha_payment (truthful only in expectation) and kda may fail here.
    push(ic_audit(b.mechanism, instance), rule.universally_ic(), b.note);
  }
  if (rule.randomized()) {
    push(ic_audit_expected(rule, protocol, instance, allow), rule.ic(),
         "expectation over the coin");
  }
  for (const AuditBranch& b : branches) {
    push(ir_audit(instance, b.outcome), true, b.note);
    push(nd_audit(instance, b.outcome), rule.non_discriminating(), b.note);
    push(balance_audit(instance, b.outcome), true, b.note);
    push(monotonicity_audit(b.mechanism, instance), true, b.note);
  }

  std::int64_t max_den = probe_denominator_bound(instance);
  for (const AuditBranch& b : branches) {
    if (!rule.non_discriminating()) {
      entries.push_back({AuditReport{"critical_value", 0, {}}, true, true,
                         "skipped: discriminating prices have no common "
                         "critical value"});
      continue;
    }
    if (max_den > 3000000) {
      entries.push_back({AuditReport{"critical_value", 0, {}}, true, true,
                         "skipped: bid denominators too large for exact "
                         "probing"});
      continue;
    }
    bool expected = rule.universally_ic();
    try {
      push(critical_value_audit(b.mechanism, instance, max_den), expected,
           b.note);
    } catch (const NotMonotonic& e) {
      AuditReport failed{"critical_value", 0, {{"", e.what()}}};
      push(std::move(failed), expected, b.note);
    }
  }

  bool ok = true;
  for (const AuditEntry& e : entries) {
    if (!e.skipped && e.expected_ok && !e.report.ok()) ok = false;
  }
  emit(verify_report_to_json(rule, protocol, entries, ok), args.output);
  return ok ? kExitOk : kExitAudit;
}

struct ExperimentArgs {
  std::string config;
  std::string output;
  std::string gnuplot;
  std::optional<std::uint64_t> seed;
};

int cmd_experiment(const ExperimentArgs& args) {
  ExperimentConfig config;
  try {
    config = experiment_config_from_json(parse_json(read_file(args.config)));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    // Bad rule strings or out-of-range fields are config-file defects.
    throw ParseError("config '" + args.config + "': " + e.what());
  }
  if (args.seed.has_value()) config.seed = *args.seed;
  if (!args.gnuplot.empty() && args.output.empty()) {
    throw BadParameter("--gnuplot needs --output (the script reads the CSV)");
  }

  TradeoffTable table = tradeoff_table(config);
  std::ostringstream csv;
  write_metrics_csv(csv, table.rows);
  emit(csv.str(), args.output);
  if (table.alpha_star.has_value()) {
    const AlphaStarResult& a = *table.alpha_star;
    std::cerr << "alpha_star: " << a.alpha.to_string()
              << " (mean revenue " << big_to_decimal(a.mean_revenue, 6)
              << " over " << a.samples << " samples, 95% CI ["
              << a.ci_lo << ", " << a.ci_hi << "])\n";
  }
  if (!args.gnuplot.empty()) {
    std::ostringstream script;
    write_gnuplot_script(script, resolve_out_path(args.output));
    write_file(resolve_out_path(args.gnuplot), script.str());
  }
  return kExitOk;
}

// Maps a thrown error to the documented exit code, printing the message.
int report_current_error() {
  try {
    throw;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const BadParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const RuleNotND& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const RuleNotProbeFriendly& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const LengthMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const EmptyMarket& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const NoSignChange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const NotMonotonic& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Double auction rules, supply-chain auction protocols, incentive "
      "audits, and Monte-Carlo experiments"};
  app.require_subcommand(1);

  AuctionArgs auction_args;
  CLI::App* auction = app.add_subcommand(
      "auction", "Run one double auction rule on a single-good instance");
  auction->add_option("--input,-i", auction_args.input, "Instance JSON file")
      ->required();
  auction->add_option("--rule,-r", auction_args.rule,
                      "kda:<k> | vcg | tr | mcafee | alphared:<a> | "
                      "alphapay:<a>")
      ->required();
  auction->add_option("--coin", auction_args.coin,
                      "Force the shared coin of a randomized rule (0 or 1)")
      ->check(CLI::Range(0, 1));
  auction->add_option("--seed", auction_args.seed,
                      "Seed the coin draw of a randomized rule");
  auction->add_option("--output,-o", auction_args.output,
                      "Also write the outcome JSON to this file");

  ChainArgs chain_args;
  CLI::App* chain = app.add_subcommand(
      "chain", "Run a distributed protocol over a supply-chain instance");
  chain->add_option("--input,-i", chain_args.input, "Instance JSON file")
      ->required();
  chain->add_option("--rule,-r", chain_args.rule, "Double auction rule")
      ->required();
  chain->add_option("--protocol,-p", chain_args.protocol,
                    "symmetric | pivot | pivot-logn (default symmetric)");
  chain->add_option("--coin", chain_args.coin,
                    "Force the shared coin of a randomized rule (0 or 1)")
      ->check(CLI::Range(0, 1));
  chain->add_option("--seed", chain_args.seed,
                    "Seed the coin draw of a randomized rule");
  chain->add_option("--scheduler-seed", chain_args.scheduler_seed,
                    "Deliver messages in seeded-random order (outcomes do "
                    "not depend on it)");
  chain->add_option("--trace", chain_args.trace,
                    "Write the per-link message trace CSV to this file");
  chain->add_flag("--allow-non-ic", chain_args.allow_non_ic,
                  "Permit rules that are not incentive compatible (kda)");
  chain->add_option("--output,-o", chain_args.output,
                    "Also write the outcome JSON to this file");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Audit a rule/protocol pair on one instance");
  verify->add_option("--input,-i", verify_args.input, "Instance JSON file")
      ->required();
  verify->add_option("--rule,-r", verify_args.rule, "Double auction rule")
      ->required();
  verify->add_option("--protocol,-p", verify_args.protocol,
                     "symmetric | pivot | pivot-logn (default symmetric)");
  verify->add_option("--output,-o", verify_args.output,
                     "Also write the report JSON to this file");

  ExperimentArgs experiment_args;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "Run a Monte-Carlo experiment from a config file");
  experiment->add_option("--config,-c", experiment_args.config,
                         "Experiment config JSON file")
      ->required();
  experiment->add_option("--output,-o", experiment_args.output,
                         "Also write the metrics CSV to this file");
  experiment->add_option("--gnuplot", experiment_args.gnuplot,
                         "Write a gnuplot script plotting the CSV");
  experiment->add_option("--seed", experiment_args.seed,
                         "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (auction->parsed()) return cmd_auction(auction_args);
    if (chain->parsed()) return cmd_chain(chain_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    if (experiment->parsed()) return cmd_experiment(experiment_args);
  } catch (...) {
    return report_current_error();
  }
  return kExitInternal;  // unreachable: a subcommand is required
}
