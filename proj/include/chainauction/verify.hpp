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

#ifndef CHAINAUCTION_VERIFY_HPP_
#define CHAINAUCTION_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chainauction/chain.hpp"

namespace chainauction {

// A mechanism under audit: a deterministic map from a full bid profile to
// an outcome (rule + protocol + fixed coin). Audits re-run it on deviated
// profiles, so deviations flow through truncation, aggregation and pricing
// exactly as a real bidder's deviation would.
using Mechanism = std::function<ChainOutcome(const SupplyChainInstance&)>;

Mechanism make_mechanism(const DaRuleSpec& rule, ProtocolKind protocol,
                         std::optional<int> coin = std::nullopt,
                         bool allow_non_ic = false);

// Maximum total gains from trade: sum of the first l entries of D^t - S^t.
Rat optimal_gain(const SupplyChainInstance& instance);

// Independent oracle: enumerates every winner subset per market (bitmask
// enumeration, no sorting insight). Markets are limited to <= 20 bids.
Rat optimal_gain_enumeration(const SupplyChainInstance& instance);

// Realized gains of an outcome: winners' values minus winners' costs.
Rat achieved_gain(const SupplyChainInstance& instance,
                  const ChainOutcome& outcome);

// achieved/optimal, defined as 1 when the optimal gain is zero.
Rat efficiency_ratio(const SupplyChainInstance& instance,
                     const ChainOutcome& outcome);

struct AuditViolation {
  AgentId agent;
  std::string detail;
};

struct AuditReport {
  std::string audit;
  int checks = 0;
  std::vector<AuditViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Candidate deviation bids for one agent: midpoints between consecutive
// distinct bid values in the agent's own market, plus one point below the
// minimum and one above the maximum. Midpoints never collide with an
// existing bid, so tie-breaking never decides an audit.
std::vector<Rat> deviation_grid(const SupplyChainInstance& instance,
                                const AgentId& agent);

// No agent can gain by deviating to any grid bid, holding others fixed.
AuditReport ic_audit(const Mechanism& mechanism,
                     const SupplyChainInstance& instance);

// Same, but utilities are averaged over the coin with exact weights
// (alpha, 1-alpha); for deterministic rules it reduces to ic_audit.
AuditReport ic_audit_expected(const DaRuleSpec& rule, ProtocolKind protocol,
                              const SupplyChainInstance& instance,
                              bool allow_non_ic = false);

// Winners never pay more than their bid / receive less than their cost;
// losers have no transfer.
AuditReport ir_audit(const SupplyChainInstance& instance,
                     const ChainOutcome& outcome);

// Non-discrimination: per market, (a) all winners' transfer magnitudes are
// equal, (b) winners are the market's best bids in curve order, (c) no
// loser's bid strictly beats the market price.
AuditReport nd_audit(const SupplyChainInstance& instance,
                     const ChainOutcome& outcome);

// Material balance: every market clears the same quantity, transfers
// belong to winners only, and revenue equals the transfer sum.
AuditReport balance_audit(const SupplyChainInstance& instance,
                          const ChainOutcome& outcome);

// Winners keep winning when they improve their bid; losers keep losing
// when they worsen it.
AuditReport monotonicity_audit(const Mechanism& mechanism,
                               const SupplyChainInstance& instance);

// The exact bid threshold at which `agent` stops winning, recovered by
// bisecting the win predicate down to an interval shorter than
// 1/max_den^2 and then taking the unique rational with denominator
// <= max_den inside it. max_den must bound the true threshold's
// denominator (thresholds are sums/halves of bid values, so twice the
// bids' common denominator lattice suffices). Exact: no tolerance.
Rat critical_value(const Mechanism& mechanism,
                   const SupplyChainInstance& instance, const AgentId& agent,
                   std::int64_t max_den);

// For every winner, |transfer| must equal the probed critical value.
AuditReport critical_value_audit(const Mechanism& mechanism,
                                 const SupplyChainInstance& instance,
                                 std::int64_t max_den);

// The unique minimal-denominator rational in [lo, hi] (Stern-Brocot
// descent). Exposed for tests.
Rat simplest_rational_in(const Rat& lo, const Rat& hi);

}  // namespace chainauction

#endif  // CHAINAUCTION_VERIFY_HPP_
