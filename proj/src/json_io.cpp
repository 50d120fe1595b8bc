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

#include "chainauction/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace chainauction {

const JValue* JValue::find(const std::string& key) const {
  if (type != Type::object) return nullptr;
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

const JValue& JValue::at(const std::string& key) const {
  const JValue* v = find(key);
  if (v == nullptr) throw ParseError("missing field '" + key + "'");
  return *v;
}

bool JValue::truthy_flag(const std::string& key, bool fallback) const {
  const JValue* v = find(key);
  return v == nullptr ? fallback : v->as_bool();
}

Rat JValue::as_rat() const {
  if (type == Type::number || type == Type::string) {
    return Rat::parse(text);
  }
  throw ParseError("expected a number");
}

std::int64_t JValue::as_int() const {
  Rat r = as_rat();
  if (!r.is_integer()) throw ParseError("expected an integer, got " + text);
  return r.num();
}

bool JValue::as_bool() const {
  if (type != Type::boolean) throw ParseError("expected a boolean");
  return boolean;
}

const std::string& JValue::as_string() const {
  if (type != Type::string) throw ParseError("expected a string");
  return text;
}

namespace {

// SAX consumer that keeps every number's source literal. nlohmann hands
// integers as values (converted losslessly) and floats along with the
// original token, which is all we need for exact rationals.
class ExactSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  JValue root;
  std::string error;

  bool null() override { return add(JValue{}); }
  bool boolean(bool val) override {
    JValue v;
    v.type = JValue::Type::boolean;
    v.boolean = val;
    return add(std::move(v));
  }
  bool number_integer(number_integer_t val) override {
    return add_number(std::to_string(val));
  }
  bool number_unsigned(number_unsigned_t val) override {
    return add_number(std::to_string(val));
  }
  bool number_float(number_float_t, const string_t& s) override {
    return add_number(s);
  }
  bool string(string_t& val) override {
    JValue v;
    v.type = JValue::Type::string;
    v.text = val;
    return add(std::move(v));
  }
  bool binary(binary_t&) override {
    error = "binary values are not supported";
    return false;
  }
  bool start_object(std::size_t) override {
    JValue v;
    v.type = JValue::Type::object;
    open_.push_back(std::move(v));
    keys_.emplace_back();
    return true;
  }
  bool key(string_t& val) override {
    keys_.back() = val;
    return true;
  }
  bool end_object() override {
    JValue v = std::move(open_.back());
    open_.pop_back();
    keys_.pop_back();
    return add(std::move(v));
  }
  bool start_array(std::size_t) override {
    JValue v;
    v.type = JValue::Type::array;
    open_.push_back(std::move(v));
    return true;
  }
  bool end_array() override {
    JValue v = std::move(open_.back());
    open_.pop_back();
    return add(std::move(v));
  }
  bool parse_error(std::size_t position, const std::string& last_token,
                   const nlohmann::detail::exception& ex) override {
    std::ostringstream os;
    os << "JSON parse error at byte " << position << " near '" << last_token
       << "': " << ex.what();
    error = os.str();
    return false;
  }

 private:
  bool add_number(std::string literal) {
    JValue v;
    v.type = JValue::Type::number;
    v.text = std::move(literal);
    return add(std::move(v));
  }

  bool add(JValue v) {
    if (open_.empty()) {
      root = std::move(v);
      return true;
    }
    JValue& top = open_.back();
    if (top.type == JValue::Type::object) {
      top.fields.emplace_back(std::move(keys_.back()), std::move(v));
    } else {
      top.items.push_back(std::move(v));
    }
    return true;
  }

  std::vector<JValue> open_;
  std::vector<std::string> keys_;  // one pending key per open object
};

void reject_unknown_keys(const JValue& doc,
                         const std::set<std::string>& allowed,
                         const std::string& what) {
  for (const auto& [k, v] : doc.fields) {
    if (!allowed.count(k)) {
      throw ParseError("unknown field '" + k + "' in " + what);
    }
  }
}

std::vector<Bid> bids_from_array(const JValue& arr, int market, int goods) {
  if (arr.type != JValue::Type::array) {
    throw ParseError("market bids must be an array of numbers");
  }
  std::vector<Bid> out;
  int i = 0;
  for (const JValue& v : arr.items) {
    out.push_back({default_agent_id(market, goods, ++i), v.as_rat()});
  }
  return out;
}

}  // namespace

JValue parse_json(const std::string& text) {
  ExactSax sax;
  if (!nlohmann::json::sax_parse(text, &sax,
                                 nlohmann::json::input_format_t::json,
                                 /*strict=*/true,
                                 /*ignore_comments=*/false)) {
    throw ParseError(sax.error.empty() ? "invalid JSON" : sax.error);
  }
  return std::move(sax.root);
}

SupplyChainInstance instance_from_json(const JValue& doc) {
  if (doc.type != JValue::Type::object) {
    throw ParseError("instance document must be a JSON object");
  }
  reject_unknown_keys(doc, {"goods", "supply", "conversions", "demand"},
                      "instance");
  SupplyChainInstance inst;
  const JValue* goods = doc.find("goods");
  std::int64_t t = goods == nullptr ? 1 : goods->as_int();
  if (t < 1 || t > 1000) throw ParseError("goods must be in [1, 1000]");
  inst.goods = static_cast<int>(t);
  inst.supply = bids_from_array(doc.at("supply"), 0, inst.goods);
  inst.demand = bids_from_array(doc.at("demand"), inst.goods, inst.goods);
  const JValue* conv = doc.find("conversions");
  if (conv != nullptr) {
    if (conv->type != JValue::Type::array) {
      throw ParseError("conversions must be an array of bid arrays");
    }
    int r = 0;
    for (const JValue& arr : conv->items) {
      inst.conversions.push_back(bids_from_array(arr, ++r, inst.goods));
    }
  }
  if (static_cast<int>(inst.conversions.size()) != inst.goods - 1) {
    throw ParseError("expected " + std::to_string(inst.goods - 1) +
                     " conversion markets, got " +
                     std::to_string(inst.conversions.size()));
  }
  return inst;
}

SupplyChainInstance load_instance_file(const std::string& path) {
  return instance_from_json(parse_json(read_file(path)));
}

ExperimentConfig experiment_config_from_json(const JValue& doc) {
  if (doc.type != JValue::Type::object) {
    throw ParseError("experiment config must be a JSON object");
  }
  reject_unknown_keys(
      doc,
      {"mode", "buyers", "sellers", "goods", "market_size", "distribution",
       "runs", "seed", "rules", "alpha_star", "exact_expectation",
       "common_random_numbers", "protocol"},
      "experiment config");
  ExperimentConfig cfg;
  if (const JValue* v = doc.find("mode")) {
    const std::string& m = v->as_string();
    if (m == "single_da") {
      cfg.mode = ExperimentConfig::Mode::single_da;
    } else if (m == "chain") {
      cfg.mode = ExperimentConfig::Mode::chain;
    } else {
      throw ParseError("mode must be 'single_da' or 'chain'");
    }
  }
  if (const JValue* v = doc.find("buyers")) {
    cfg.buyers = static_cast<int>(v->as_int());
  }
  if (const JValue* v = doc.find("sellers")) {
    cfg.sellers = static_cast<int>(v->as_int());
  }
  if (const JValue* v = doc.find("goods")) {
    cfg.goods = static_cast<int>(v->as_int());
  }
  if (const JValue* v = doc.find("market_size")) {
    cfg.market_size = static_cast<int>(v->as_int());
  }
  if (const JValue* v = doc.find("distribution")) {
    reject_unknown_keys(*v, {"low", "high", "lattice"}, "distribution");
    if (const JValue* f = v->find("low")) cfg.dist.low = f->as_rat();
    if (const JValue* f = v->find("high")) cfg.dist.high = f->as_rat();
    if (const JValue* f = v->find("lattice")) cfg.dist.lattice = f->as_int();
  }
  if (const JValue* v = doc.find("runs")) {
    cfg.runs = static_cast<int>(v->as_int());
  }
  if (const JValue* v = doc.find("seed")) {
    cfg.seed = static_cast<std::uint64_t>(v->as_int());
  }
  if (const JValue* v = doc.find("rules")) {
    if (v->type != JValue::Type::array) {
      throw ParseError("rules must be an array of rule strings");
    }
    for (const JValue& r : v->items) {
      cfg.rules.push_back(DaRuleSpec::parse(r.as_string()));
    }
  }
  if (const JValue* v = doc.find("alpha_star")) {
    if (v->type == JValue::Type::boolean) {
      cfg.include_alpha_star = v->boolean;
    } else if (v->type == JValue::Type::object) {
      reject_unknown_keys(*v, {"enabled", "samples", "tol"}, "alpha_star");
      cfg.include_alpha_star = v->truthy_flag("enabled", true);
      if (const JValue* f = v->find("samples")) {
        cfg.alpha_star_samples = static_cast<int>(f->as_int());
      }
      if (const JValue* f = v->find("tol")) cfg.alpha_star_tol = f->as_rat();
    } else {
      throw ParseError("alpha_star must be a boolean or an object");
    }
  }
  if (const JValue* v = doc.find("exact_expectation")) {
    cfg.exact_expectation = v->as_bool();
  }
  if (const JValue* v = doc.find("common_random_numbers")) {
    cfg.common_random_numbers = v->as_bool();
  }
  if (const JValue* v = doc.find("protocol")) {
    cfg.protocol = parse_protocol(v->as_string());
  }
  cfg.validate();
  return cfg;
}

std::string rat_text(const Rat& value) { return value.to_string(); }

namespace {

using Json = nlohmann::ordered_json;

Json prices_json(const std::vector<Rat>& prices) {
  Json arr = Json::array();
  for (const Rat& p : prices) arr.push_back(rat_text(p));
  return arr;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string da_result_to_json(const DaRuleSpec& rule, const PriceCurve& supply,
                              const PriceCurve& demand,
                              const DaResult& result) {
  Json j;
  j["rule"] = rule.name();
  j["q"] = result.q;
  j["winners"] = {{"sellers", supply.top_agents(result.q)},
                  {"buyers", demand.top_agents(result.q)}};
  j["buyer_prices"] = prices_json(result.buyer_prices);
  j["seller_prices"] = prices_json(result.seller_prices);
  if (result.uniform.has_value()) {
    j["uniform"] = {{"buyer", rat_text(result.uniform->first)},
                    {"seller", rat_text(result.uniform->second)}};
  } else {
    j["uniform"] = nullptr;
  }
  if (result.coin.has_value()) {
    j["coin"] = *result.coin;
  }
  j["revenue"] = rat_text(result.revenue());
  return dump(j);
}

std::string outcome_to_json(const DaRuleSpec& rule, ProtocolKind protocol,
                            const ChainOutcome& outcome) {
  Json j;
  j["rule"] = rule.name();
  j["protocol"] = protocol_name(protocol);
  j["q"] = outcome.q;
  j["consistent"] = outcome.consistent;
  if (outcome.coin.has_value()) {
    j["coin"] = *outcome.coin;
  }
  j["per_market_q"] = outcome.per_market_q;
  Json winners = Json::object();
  for (std::size_t m = 0; m < outcome.winners.size(); ++m) {
    winners[std::to_string(m)] = outcome.winners[m];
  }
  j["winners"] = winners;
  j["dropped"] = outcome.dropped;
  Json transfers = Json::object();
  for (const auto& [agent, x] : outcome.transfers) {
    transfers[agent] = rat_text(x);
  }
  j["transfers"] = transfers;
  j["revenue"] = rat_text(outcome.revenue);
  return dump(j);
}

std::string verify_report_to_json(const DaRuleSpec& rule,
                                  ProtocolKind protocol,
                                  const std::vector<AuditEntry>& entries,
                                  bool ok) {
  Json j;
  j["rule"] = rule.name();
  j["protocol"] = protocol_name(protocol);
  j["ok"] = ok;
  Json audits = Json::array();
  for (const AuditEntry& e : entries) {
    Json a;
    a["audit"] = e.report.audit;
    std::string status;
    if (e.skipped) {
      status = "skipped";
    } else if (e.report.ok()) {
      status = "pass";
    } else {
      status = e.expected_ok ? "fail" : "expected-fail";
    }
    a["status"] = status;
    a["checks"] = e.report.checks;
    if (!e.note.empty()) a["note"] = e.note;
    Json violations = Json::array();
    for (const AuditViolation& v : e.report.violations) {
      violations.push_back({{"agent", v.agent}, {"detail", v.detail}});
    }
    a["violations"] = violations;
    audits.push_back(a);
  }
  j["audits"] = audits;
  return dump(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path + "'");
  out << content;
  if (!out) throw Error("failed writing file '" + path + "'");
}

}  // namespace chainauction
