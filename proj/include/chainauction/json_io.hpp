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

#ifndef CHAINAUCTION_JSON_IO_HPP_
#define CHAINAUCTION_JSON_IO_HPP_

#include <string>
#include <utility>
#include <vector>

#include "chainauction/chain.hpp"
#include "chainauction/experiments.hpp"
#include "chainauction/verify.hpp"

namespace chainauction {

// A JSON document whose numbers are kept as their source literals so bid
// values convert to exact rationals without a float detour ("0.1" is
// exactly 1/10). Built by a SAX pass; object field order is preserved.
struct JValue {
  enum class Type { null, boolean, number, string, array, object };

  Type type = Type::null;
  bool boolean = false;
  std::string text;  // number literal or string payload
  std::vector<JValue> items;
  std::vector<std::pair<std::string, JValue>> fields;

  const JValue* find(const std::string& key) const;
  const JValue& at(const std::string& key) const;  // ParseError if absent
  bool truthy_flag(const std::string& key, bool fallback) const;

  // Number literal, or a string holding a decimal / "p/q" fraction.
  Rat as_rat() const;
  std::int64_t as_int() const;
  bool as_bool() const;
  const std::string& as_string() const;
};

JValue parse_json(const std::string& text);  // throws ParseError

// Instance files:
//   {"goods": t, "supply": [..], "conversions": [[..] x (t-1)],
//    "demand": [..]}
// goods defaults to 1 and conversions may be omitted for plain double
// auctions. Bids are numbers (or strings with exact decimals/fractions);
// agents get canonical ids s1.., c<r>_1.., d1.. in file order.
SupplyChainInstance instance_from_json(const JValue& doc);
SupplyChainInstance load_instance_file(const std::string& path);

// Experiment config files; see ExperimentConfig for the field meanings:
//   {"mode": "single_da"|"chain", "buyers": .., "sellers": ..,
//    "goods": .., "market_size": ..,
//    "distribution": {"low": .., "high": .., "lattice": ..},
//    "runs": .., "seed": .., "rules": ["tr", ..],
//    "alpha_star": true | {"samples": .., "tol": ..},
//    "exact_expectation": .., "common_random_numbers": ..,
//    "protocol": "symmetric"|"pivot"|"pivot-logn"}
ExperimentConfig experiment_config_from_json(const JValue& doc);

// Exact value serialization: finite decimal when the denominator divides a
// power of ten, "p/q" otherwise. Emitted as JSON strings.
std::string rat_text(const Rat& value);

// Writers (pretty-printed JSON documents).
std::string da_result_to_json(const DaRuleSpec& rule, const PriceCurve& supply,
                              const PriceCurve& demand,
                              const DaResult& result);
std::string outcome_to_json(const DaRuleSpec& rule, ProtocolKind protocol,
                            const ChainOutcome& outcome);

// One audit entry with its expectation ("pass" / "fail" / "expected-fail"
// / "skipped") for verification reports.
struct AuditEntry {
  AuditReport report;
  bool expected_ok = true;
  bool skipped = false;
  std::string note;
};
std::string verify_report_to_json(const DaRuleSpec& rule,
                                  ProtocolKind protocol,
                                  const std::vector<AuditEntry>& entries,
                                  bool ok);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace chainauction

#endif  // CHAINAUCTION_JSON_IO_HPP_
