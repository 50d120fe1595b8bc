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

#ifndef CHAINAUCTION_CHAIN_HPP_
#define CHAINAUCTION_CHAIN_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainauction/instance.hpp"
#include "chainauction/rules.hpp"

namespace chainauction {

// The three distributed protocols. All run over a simulated line network
// of t+1 market nodes connected by t links; "downstream" points toward
// the demand market.
//
//   symmetric   every market runs the DA rule locally on its own curve
//               pair after a forward supply aggregation and a backward
//               residual-demand sweep. Works for any rule; markets can
//               disagree on the clearing quantity if the rule is
//               inconsistent.
//   pivot       only the demand market (the pivot) runs the rule; a price
//               bound V and quantity q travel upstream and each market
//               derives its winners' uniform payment from them. Requires a
//               non-discriminating rule.
//   pivot_logn  pivot variant that discovers the trade size by binary
//               search with constant-size probe messages instead of
//               shipping whole curves: O(log n) messages per link.
enum class ProtocolKind { symmetric, pivot, pivot_logn };

ProtocolKind parse_protocol(const std::string& text);
std::string protocol_name(ProtocolKind kind);

// One recorded message on one link. Byte accounting uses a fixed model:
// 16 header bytes plus 12 bytes per carried price entry.
struct TraceRow {
  int link = 0;  // link i connects market i and market i+1
  bool downstream = true;
  std::string variant;
  int entries = 0;
  int bytes = 0;
};

struct Trace {
  std::vector<TraceRow> rows;

  int messages_on_link(int link) const;
  int entries_on_link(int link) const;
  int max_messages_per_link(int num_links) const;
  int min_entries_per_link(int num_links) const;
  long long total_bytes() const;

  // CSV with header: link_id,direction,variant,entries,bytes.
  void to_csv(std::ostream& os) const;
};

struct ChainRunOptions {
  // For randomized rules: either force the shared coin (0/1) or provide a
  // seed it is drawn from. Exactly the demand market draws the coin.
  std::optional<int> coin;
  std::optional<std::uint64_t> seed;
  // kda is not incentive compatible; running it in a chain requires this
  // explicit override.
  bool allow_non_ic = false;
  // When set, messages are delivered in seeded-random order instead of the
  // default deterministic order. Outcomes must not depend on this (links
  // are FIFO and node logic is event-driven); tests exercise it.
  std::optional<std::uint64_t> scheduler_seed;
};

struct ChainOutcome {
  // The demand market's clearing quantity (the common quantity whenever
  // the run is consistent).
  int q = 0;
  // True iff every market cleared the same quantity. Inconsistent runs
  // (e.g. mcafee under the symmetric protocol) still report the
  // per-market results below for diagnosis.
  bool consistent = true;
  std::vector<int> per_market_q;           // per market 0..t
  std::vector<std::vector<AgentId>> winners;  // per market, curve order
  std::vector<AgentId> dropped;            // truncated away; always losers
  // Signed transfers: positive pays the mechanism (buyers), negative is
  // paid by it (sellers/converters). Only winners appear.
  std::map<AgentId, Rat> transfers;
  Rat revenue;  // sum of transfers; the mechanism's budget surplus
  std::optional<int> coin;
  Trace trace;
};

// Runs one protocol over one instance. Throws RuleNotND if a pivot variant
// is asked to run a discriminating rule, BadParameter for kda without the
// override or a randomized rule without coin/seed.
ChainOutcome run_chain(const SupplyChainInstance& instance,
                       const DaRuleSpec& rule, ProtocolKind protocol,
                       const ChainRunOptions& options = {});

// The coin a randomized rule draws from a seed. Shared by the chain driver
// and the single-auction front end so equal seeds yield equal coins.
int draw_shared_coin(const DaRuleSpec& rule, std::uint64_t seed);

}  // namespace chainauction

#endif  // CHAINAUCTION_CHAIN_HPP_
