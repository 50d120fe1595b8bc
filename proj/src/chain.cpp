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

#include "chainauction/chain.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <utility>

#include "chainauction/random.hpp"

namespace chainauction {

ProtocolKind parse_protocol(const std::string& text) {
  if (text == "symmetric") return ProtocolKind::symmetric;
  if (text == "pivot") return ProtocolKind::pivot;
  if (text == "pivot-logn" || text == "pivot_logn") {
    return ProtocolKind::pivot_logn;
  }
  throw BadParameter("unknown protocol '" + text + "'");
}

std::string protocol_name(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::symmetric:
      return "symmetric";
    case ProtocolKind::pivot:
      return "pivot";
    case ProtocolKind::pivot_logn:
      return "pivot-logn";
  }
  throw BadParameter("unknown protocol kind");
}

int Trace::messages_on_link(int link) const {
  int c = 0;
  for (const TraceRow& r : rows) c += r.link == link ? 1 : 0;
  return c;
}

int Trace::entries_on_link(int link) const {
  int c = 0;
  for (const TraceRow& r : rows) c += r.link == link ? r.entries : 0;
  return c;
}

int Trace::max_messages_per_link(int num_links) const {
  int worst = 0;
  for (int l = 0; l < num_links; ++l) {
    worst = std::max(worst, messages_on_link(l));
  }
  return worst;
}

int Trace::min_entries_per_link(int num_links) const {
  int best = -1;
  for (int l = 0; l < num_links; ++l) {
    int e = entries_on_link(l);
    best = best < 0 ? e : std::min(best, e);
  }
  return best < 0 ? 0 : best;
}

long long Trace::total_bytes() const {
  long long b = 0;
  for (const TraceRow& r : rows) b += r.bytes;
  return b;
}

void Trace::to_csv(std::ostream& os) const {
  os << "link_id,direction,variant,entries,bytes\n";
  for (const TraceRow& r : rows) {
    os << r.link << ',' << (r.downstream ? "downstream" : "upstream") << ','
       << r.variant << ',' << r.entries << ',' << r.bytes << '\n';
  }
}

namespace {

// ---------------------------------------------------------------------------
// Message layer
// ---------------------------------------------------------------------------

struct Message {
  enum class Kind {
    size_announce,   // int size (running minimum, then the final n)
    coin_share,      // int coin (symmetric protocol only)
    curve_forward,   // aggregated supply curve prices S^r
    curve_backward,  // residual demand curve prices D^r
    pivot_decision,  // (value V, quantity q)
    probe_request,   // int index
    probe_reply,     // (index, running partial sum S_index^r)
  };

  Kind kind;
  int size = 0;
  int coin = 0;
  std::vector<Rat> prices;
  Rat value;
  int q = 0;
  int index = 0;

  int num_entries() const {
    switch (kind) {
      case Kind::curve_forward:
      case Kind::curve_backward:
        return static_cast<int>(prices.size());
      case Kind::pivot_decision:
      case Kind::probe_reply:
        return 1;
      default:
        return 0;
    }
  }

  const char* variant_name() const {
    switch (kind) {
      case Kind::size_announce:
        return "size_announce";
      case Kind::coin_share:
        return "coin_share";
      case Kind::curve_forward:
        return "curve_forward";
      case Kind::curve_backward:
        return "curve_backward";
      case Kind::pivot_decision:
        return "pivot_decision";
      case Kind::probe_request:
        return "probe_request";
      case Kind::probe_reply:
        return "probe_reply";
    }
    return "?";
  }
};

constexpr int kHeaderBytes = 16;
constexpr int kEntryBytes = 12;

class Node;

// A line of t+1 nodes joined by t bidirectional FIFO links. Delivery order
// across links is a scheduler policy (deterministic scan by default,
// seeded-random for order-independence tests); per-link order is FIFO in
// each direction, which is the only ordering nodes may rely on.
class Network {
 public:
  Network(int num_nodes, Trace* trace, std::optional<std::uint64_t> sched_seed)
      : num_nodes_(num_nodes),
        queues_(std::max(num_nodes - 1, 0)),
        trace_(trace),
        rng_(sched_seed.has_value() ? SplitMix64(*sched_seed)
                                    : SplitMix64(0)),
        random_order_(sched_seed.has_value()) {}

  void send_down(int from, Message m) { post(from, /*downstream=*/true, std::move(m)); }
  void send_up(int from, Message m) { post(from, /*downstream=*/false, std::move(m)); }

  void run(const std::vector<std::unique_ptr<Node>>& nodes);

 private:
  void post(int from, bool downstream, Message m) {
    int link = downstream ? from : from - 1;
    if (link < 0 || link >= static_cast<int>(queues_.size())) {
      throw Error("message sent off the end of the chain");
    }
    {
      std::lock_guard<std::mutex> lock(trace_mutex_);
      int entries = m.num_entries();
      trace_->rows.push_back({link, downstream, m.variant_name(), entries,
                              kHeaderBytes + kEntryBytes * entries});
    }
    queues_[link][downstream ? 0 : 1].push_back(std::move(m));
  }

  int num_nodes_;
  // queues_[link][0]: downstream direction, [1]: upstream.
  std::vector<std::array<std::deque<Message>, 2>> queues_;
  Trace* trace_;
  std::mutex trace_mutex_;
  SplitMix64 rng_;
  bool random_order_;
};

// ---------------------------------------------------------------------------
// Market nodes
// ---------------------------------------------------------------------------

// What one market reports after the run: its clearing quantity, winners in
// curve order, and each winner's signed transfer.
struct NodeReport {
  bool applied = false;
  int q = 0;
  std::vector<AgentId> winners;
  std::vector<Rat> transfers;
};

class Node {
 public:
  Node(int index, int goods, DaRuleSpec rule, PriceCurve local)
      : index_(index), goods_(goods), rule_(std::move(rule)),
        local_(std::move(local)) {}
  virtual ~Node() = default;

  virtual void start(Network& net) {
    if (is_supply()) {
      Message m;
      m.kind = Message::Kind::size_announce;
      m.size = local_.size();
      net.send_down(index_, std::move(m));
    }
  }
  virtual void on_message(Network& net, bool arrived_downstream,
                          const Message& m) = 0;

  const NodeReport& report() const { return report_; }
  const std::vector<AgentId>& dropped() const { return dropped_; }
  void preset_coin(int coin) { coin_ = coin; }

 protected:
  bool is_supply() const { return index_ == 0; }
  bool is_demand() const { return index_ == goods_; }
  bool is_conversion() const { return !is_supply() && !is_demand(); }

  // Size phase, shared by all three protocols: the supply market starts a
  // forward running-minimum sweep; the demand market fixes n = min size
  // and broadcasts it back so every market can truncate to its n best
  // bids. Each node adopts n exactly once.
  void adopt_n(int n) {
    if (sized_) throw Error("size announced twice");
    sized_ = true;
    n_ = n;
    trunc_ = local_.truncated(n, &dropped_);
  }

  void apply_and_report(const PriceCurve& supply, const PriceCurve& demand) {
    DaResult res = apply_da_rule(rule_, supply, demand,
                                 rule_.randomized() ? coin_ : std::nullopt);
    report_da(res);
  }

  // Records this market's own side of a DA outcome. The market's real
  // agents sit on the demand side only in the demand market.
  void report_da(const DaResult& res) {
    report_.applied = true;
    report_.q = res.q;
    report_.winners = trunc_.top_agents(res.q);
    const auto& own = is_demand() ? res.buyer_prices : res.seller_prices;
    report_.transfers.clear();
    for (const Rat& p : own) {
      report_.transfers.push_back(is_demand() ? p : -p);
    }
  }

  void report_uniform(int q, const Rat& pay, bool pays_mechanism) {
    report_.applied = true;
    report_.q = q;
    report_.winners = trunc_.top_agents(q);
    report_.transfers.assign(q, pays_mechanism ? pay : -pay);
  }

  int index_;
  int goods_;
  DaRuleSpec rule_;
  PriceCurve local_;   // untruncated local curve
  PriceCurve trunc_;   // local curve truncated to n
  std::vector<AgentId> dropped_;
  int n_ = -1;
  bool sized_ = false;
  std::optional<int> coin_;
  NodeReport report_;
};

void Network::run(const std::vector<std::unique_ptr<Node>>& nodes) {
  for (const auto& n : nodes) n->start(*this);
  for (;;) {
    // Collect the non-empty (link, direction) queues.
    std::vector<std::pair<int, int>> ready;
    for (int l = 0; l < static_cast<int>(queues_.size()); ++l) {
      for (int d = 0; d < 2; ++d) {
        if (!queues_[l][d].empty()) ready.emplace_back(l, d);
      }
    }
    if (ready.empty()) break;
    auto [link, dir] =
        ready[random_order_ ? rng_.bounded(ready.size()) : 0];
    Message m = std::move(queues_[link][dir].front());
    queues_[link][dir].pop_front();
    bool downstream = dir == 0;
    int receiver = downstream ? link + 1 : link;
    nodes[receiver]->on_message(*this, downstream, m);
  }
}

std::vector<Rat> curve_prices(const PriceCurve& c) {
  std::vector<Rat> out;
  out.reserve(c.size());
  for (int i = 1; i <= c.size(); ++i) out.push_back(c.price(i));
  return out;
}

PriceCurve make_curve(CurveKind kind, const std::vector<Rat>& prices) {
  std::vector<CurveEntry> entries;
  entries.reserve(prices.size());
  for (const Rat& p : prices) entries.push_back({p, AgentId()});
  return PriceCurve(kind, std::move(entries));
}

std::vector<Rat> vec_add(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  if (a.size() != b.size()) throw LengthMismatch("curve payload size differs");
  std::vector<Rat> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<Rat> vec_sub(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  if (a.size() != b.size()) throw LengthMismatch("curve payload size differs");
  std::vector<Rat> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric protocol
// ---------------------------------------------------------------------------

class SymmetricNode : public Node {
 public:
  using Node::Node;

  void on_message(Network& net, bool arrived_downstream,
                  const Message& m) override {
    switch (m.kind) {
      case Message::Kind::size_announce:
        if (arrived_downstream) {
          // Forward running minimum; the demand market closes the phase.
          if (is_demand()) {
            adopt_n(std::min(m.size, local_.size()));
            Message back;
            back.kind = Message::Kind::size_announce;
            back.size = n_;
            net.send_up(index_, std::move(back));
            if (rule_.randomized()) {
              Message cs;
              cs.kind = Message::Kind::coin_share;
              cs.coin = coin_.value();
              net.send_up(index_, std::move(cs));
            }
          } else {
            Message fwd;
            fwd.kind = Message::Kind::size_announce;
            fwd.size = std::min(m.size, local_.size());
            net.send_down(index_, std::move(fwd));
          }
        } else {
          // Backward n broadcast.
          adopt_n(m.size);
          if (is_conversion()) {
            Message fwd = m;
            net.send_up(index_, std::move(fwd));
          }
          if (is_supply()) {
            Message curve;
            curve.kind = Message::Kind::curve_forward;
            curve.prices = curve_prices(trunc_);
            net.send_down(index_, std::move(curve));
          }
        }
        return;
      case Message::Kind::coin_share:
        coin_ = m.coin;
        if (is_conversion()) {
          Message fwd = m;
          net.send_up(index_, std::move(fwd));
        }
        return;
      case Message::Kind::curve_forward: {
        input_supply_ = m.prices;  // S^r for this market's good
        if (is_conversion()) {
          Message fwd;
          fwd.kind = Message::Kind::curve_forward;
          fwd.prices = vec_add(m.prices, curve_prices(trunc_));
          net.send_down(index_, std::move(fwd));
        } else if (is_demand()) {
          // The pivotal pair for the demand market: (S^t, D^t).
          apply_and_report(make_curve(CurveKind::supply, input_supply_),
                           trunc_);
          Message back;
          back.kind = Message::Kind::curve_backward;
          back.prices = curve_prices(trunc_);  // D^t
          net.send_up(index_, std::move(back));
        }
        return;
      }
      case Message::Kind::curve_backward: {
        // m.prices is D^{r+1}, the residual demand for this market's output.
        if (is_conversion()) {
          // This market's own demand: D^{r->r+1} = D^{r+1} - S^r.
          std::vector<Rat> own_demand = vec_sub(m.prices, input_supply_);
          apply_and_report(trunc_,
                           make_curve(CurveKind::demand, own_demand));
          Message back;
          back.kind = Message::Kind::curve_backward;
          back.prices = vec_sub(m.prices, curve_prices(trunc_));  // D^r
          net.send_up(index_, std::move(back));
        } else if (is_supply()) {
          apply_and_report(trunc_, make_curve(CurveKind::demand, m.prices));
        }
        return;
      }
      default:
        throw Error("unexpected message in symmetric protocol");
    }
  }

 private:
  std::vector<Rat> input_supply_;
};

// ---------------------------------------------------------------------------
// Pivot protocol (full curves)
// ---------------------------------------------------------------------------

class PivotNode : public Node {
 public:
  using Node::Node;

  void on_message(Network& net, bool arrived_downstream,
                  const Message& m) override {
    switch (m.kind) {
      case Message::Kind::size_announce:
        if (arrived_downstream) {
          if (is_demand()) {
            adopt_n(std::min(m.size, local_.size()));
            Message back;
            back.kind = Message::Kind::size_announce;
            back.size = n_;
            net.send_up(index_, std::move(back));
          } else {
            Message fwd;
            fwd.kind = Message::Kind::size_announce;
            fwd.size = std::min(m.size, local_.size());
            net.send_down(index_, std::move(fwd));
          }
        } else {
          adopt_n(m.size);
          if (is_conversion()) {
            Message fwd = m;
            net.send_up(index_, std::move(fwd));
          }
          if (is_supply()) {
            Message curve;
            curve.kind = Message::Kind::curve_forward;
            curve.prices = curve_prices(trunc_);
            net.send_down(index_, std::move(curve));
          }
        }
        return;
      case Message::Kind::curve_forward:
        input_supply_ = m.prices;
        if (is_conversion()) {
          Message fwd;
          fwd.kind = Message::Kind::curve_forward;
          fwd.prices = vec_add(m.prices, curve_prices(trunc_));
          net.send_down(index_, std::move(fwd));
        } else if (is_demand()) {
          decide(net);
        }
        return;
      case Message::Kind::pivot_decision:
        settle_upstream(net, m.value, m.q);
        return;
      default:
        throw Error("unexpected message in pivot protocol");
    }
  }

 private:
  // The pivot (demand market) applies the rule on (S^t, D^t), charges its
  // consumers the uniform buyer price, and sends (V = P_S, q) upstream.
  void decide(Network& net) {
    DaResult res =
        apply_da_rule(rule_, make_curve(CurveKind::supply, input_supply_),
                      trunc_, rule_.randomized() ? coin_ : std::nullopt);
    Rat v;
    if (res.q > 0) {
      if (!res.uniform.has_value()) {
        throw RuleNotND("pivot protocol needs uniform prices");
      }
      report_uniform(res.q, res.uniform->first, /*pays_mechanism=*/true);
      v = res.uniform->second;
    } else {
      report_uniform(0, Rat(0), true);
    }
    Message dec;
    dec.kind = Message::Kind::pivot_decision;
    dec.value = v;
    dec.q = res.q;
    net.send_up(index_, std::move(dec));
  }

  // A conversion market pays its q cheapest converters
  //   min(V - S_q^r, S_{q+1}^{r->r+1})
  // (input aggregate at q, own next-best bid as the cap) and forwards
  // (V - S_q^{r->r+1}, q); the supply market pays min(V, S_{q+1}^1).
  void settle_upstream(Network& net, const Rat& v, int q) {
    if (is_demand()) throw Error("pivot decision echoed downstream");
    if (q == 0) {
      report_uniform(0, Rat(0), false);
    } else if (is_conversion()) {
      Rat pay = min_finite(v - input_supply_[q - 1], trunc_.price_ext(q + 1));
      report_uniform(q, pay, /*pays_mechanism=*/false);
    } else {
      Rat pay = min_finite(v, trunc_.price_ext(q + 1));
      report_uniform(q, pay, /*pays_mechanism=*/false);
    }
    if (is_conversion()) {
      Message fwd;
      fwd.kind = Message::Kind::pivot_decision;
      fwd.value = q == 0 ? v : v - trunc_.price(q);
      fwd.q = q;
      net.send_up(index_, std::move(fwd));
    }
  }

  std::vector<Rat> input_supply_;
};

// ---------------------------------------------------------------------------
// Pivot protocol with binary search (O(log n) messages per link)
// ---------------------------------------------------------------------------

class PivotLognNode : public Node {
 public:
  using Node::Node;

  void on_message(Network& net, bool arrived_downstream,
                  const Message& m) override {
    switch (m.kind) {
      case Message::Kind::size_announce:
        if (arrived_downstream) {
          if (is_demand()) {
            adopt_n(std::min(m.size, local_.size()));
            Message back;
            back.kind = Message::Kind::size_announce;
            back.size = n_;
            net.send_up(index_, std::move(back));
            begin_search(net);
          } else {
            Message fwd;
            fwd.kind = Message::Kind::size_announce;
            fwd.size = std::min(m.size, local_.size());
            net.send_down(index_, std::move(fwd));
          }
        } else {
          adopt_n(m.size);
          if (is_conversion()) {
            Message fwd = m;
            net.send_up(index_, std::move(fwd));
          }
        }
        return;
      case Message::Kind::probe_request:
        if (is_supply()) {
          Message reply;
          reply.kind = Message::Kind::probe_reply;
          reply.index = m.index;
          reply.value = trunc_.price(m.index);  // S_i^1
          net.send_down(index_, std::move(reply));
        } else {
          Message fwd = m;
          net.send_up(index_, std::move(fwd));
        }
        return;
      case Message::Kind::probe_reply:
        if (is_conversion()) {
          // The running sum as it arrives equals S_i^r, this market's
          // aggregated input cost at index i; cache it since the payment
          // formula needs exactly S_q^r later.
          input_cache_[m.index] = m.value;
          Message fwd;
          fwd.kind = Message::Kind::probe_reply;
          fwd.index = m.index;
          fwd.value = m.value + trunc_.price(m.index);
          net.send_down(index_, std::move(fwd));
        } else if (is_demand()) {
          agg_cache_[m.index] = m.value;  // S_i^t
          step_search(net);
        } else {
          throw Error("probe reply reached the supply market");
        }
        return;
      case Message::Kind::pivot_decision:
        settle_upstream(net, m.value, m.q);
        return;
      default:
        throw Error("unexpected message in pivot-logn protocol");
    }
  }

 private:
  // Bisection for l = max { i : D_i^t >= S_i^t } over [0, n]. The update
  // rule (lo = mid on success, hi = mid-1 on failure) guarantees that the
  // indices l (if >= 1) and l+1 (if <= n) are both probed along the way,
  // so most rules need no extra fetch afterwards.
  void begin_search(Network& net) {
    lo_ = 0;
    hi_ = n_;
    step_search(net);
  }

  void probe(Network& net, int index) {
    awaiting_ = index;
    Message req;
    req.kind = Message::Kind::probe_request;
    req.index = index;
    net.send_up(index_, std::move(req));
  }

  bool known(int i) const { return agg_cache_.count(i) != 0; }
  const Rat& agg(int i) const { return agg_cache_.at(i); }

  void step_search(Network& net) {
    if (phase_ == Phase::searching) {
      if (awaiting_ != 0) {
        int mid = awaiting_;
        awaiting_ = 0;
        if (trunc_.price(mid) >= agg(mid)) {
          lo_ = mid;  // D_mid >= S_mid: at least mid trades are efficient
        } else {
          hi_ = mid - 1;
        }
      }
      if (lo_ < hi_) {
        probe(net, (lo_ + hi_ + 1) / 2);
        return;
      }
      l_ = lo_;
      phase_ = Phase::fetching;
      // Rules priced off the reduced trade need S_{l-1} as well; the
      // search cannot have probed it.
      int extra = extra_index_needed();
      if (extra > 0 && !known(extra)) {
        probe(net, extra);
        return;
      }
      decide(net);
      return;
    }
    if (phase_ == Phase::fetching) {
      awaiting_ = 0;
      decide(net);
    }
  }

  // Which index beyond {l, l+1} the final pricing needs, or 0.
  int extra_index_needed() {
    if (l_ >= 1 && !known(l_)) {
      throw Error("bisection failed to probe l");
    }
    if (l_ < n_ && !known(l_ + 1)) {
      throw Error("bisection failed to probe l+1");
    }
    bool reduction = false;
    switch (rule_.id) {
      case RuleId::trade_reduction:
        reduction = true;
        break;
      case RuleId::alpha_reduction:
        reduction = coin_.value() == 1;
        break;
      case RuleId::mcafee:
        reduction = l_ >= 1 && !mcafee_accepts();
        break;
      default:
        break;
    }
    return reduction && l_ >= 2 ? l_ - 1 : 0;
  }

  bool mcafee_accepts() const {
    if (l_ < 1 || l_ >= n_) return false;  // no (l+1)-th pair at the end
    Rat p = (agg(l_ + 1) + trunc_.price(l_ + 1)) / Rat(2);
    return agg(l_) <= p && p <= trunc_.price(l_);
  }

  void decide(Network& net) {
    phase_ = Phase::done;
    int q = 0;
    Rat pb, ps;
    auto vcg_prices = [&] {
      q = l_;
      pb = max_finite(agg(l_), trunc_.price_ext(l_ + 1));
      ps = l_ < n_ ? min(trunc_.price(l_), agg(l_ + 1)) : trunc_.price(l_);
    };
    auto reduction_prices = [&] {
      q = l_ - 1;
      if (q > 0) {
        pb = trunc_.price(l_);
        ps = agg(l_);
      }
    };
    if (l_ >= 1) {
      switch (rule_.id) {
        case RuleId::kda:
          q = l_;
          pb = ps = rule_.param * agg(l_) +
                    (Rat(1) - rule_.param) * trunc_.price(l_);
          break;
        case RuleId::vcg:
          vcg_prices();
          break;
        case RuleId::trade_reduction:
          reduction_prices();
          break;
        case RuleId::mcafee:
          if (mcafee_accepts()) {
            q = l_;
            pb = ps = (agg(l_ + 1) + trunc_.price(l_ + 1)) / Rat(2);
          } else {
            reduction_prices();
          }
          break;
        case RuleId::alpha_reduction:
          if (coin_.value() == 1) {
            reduction_prices();
          } else {
            vcg_prices();
          }
          break;
        default:
          throw RuleNotND("pivot protocol needs uniform prices");
      }
    }
    report_uniform(q, q > 0 ? pb : Rat(0), /*pays_mechanism=*/true);
    Message dec;
    dec.kind = Message::Kind::pivot_decision;
    dec.value = q > 0 ? ps : Rat(0);
    dec.q = q;
    net.send_up(index_, std::move(dec));
  }

  void settle_upstream(Network& net, const Rat& v, int q) {
    if (is_demand()) throw Error("pivot decision echoed downstream");
    if (q == 0) {
      report_uniform(0, Rat(0), false);
    } else if (is_conversion()) {
      auto it = input_cache_.find(q);
      if (it == input_cache_.end()) {
        throw Error("conversion market missing probe cache at q");
      }
      Rat pay = min_finite(v - it->second, trunc_.price_ext(q + 1));
      report_uniform(q, pay, /*pays_mechanism=*/false);
    } else {
      Rat pay = min_finite(v, trunc_.price_ext(q + 1));
      report_uniform(q, pay, /*pays_mechanism=*/false);
    }
    if (is_conversion()) {
      Message fwd;
      fwd.kind = Message::Kind::pivot_decision;
      fwd.value = q == 0 ? v : v - trunc_.price(q);
      fwd.q = q;
      net.send_up(index_, std::move(fwd));
    }
  }

  enum class Phase { searching, fetching, done };
  Phase phase_ = Phase::searching;
  int lo_ = 0, hi_ = 0, l_ = 0;
  int awaiting_ = 0;  // probe index in flight (0 = none)
  std::map<int, Rat> input_cache_;  // conversion: S_i^r by index
  std::map<int, Rat> agg_cache_;    // demand: S_i^t by index
};

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

/// The demand market's coin: forced, or drawn from the seed.
std::optional<int> resolve_coin(const DaRuleSpec& rule,
                                const ChainRunOptions& options) {
  if (!rule.randomized()) {
    if (options.coin.has_value()) {
      throw BadParameter("rule '" + rule.name() + "' is deterministic");
    }
    return std::nullopt;
  }
  if (options.coin.has_value()) {
    if (*options.coin != 0 && *options.coin != 1) {
      throw BadParameter("coin must be 0 or 1");
    }
    return options.coin;
  }
  if (options.seed.has_value()) {
    return draw_shared_coin(rule, *options.seed);
  }
  throw BadParameter("randomized rule '" + rule.name() +
                     "' needs a coin or a seed");
}

}  // namespace

int draw_shared_coin(const DaRuleSpec& rule, std::uint64_t seed) {
  SplitMix64 rng = substream(seed, {/*purpose=*/0xC01uLL});
  return rng.bernoulli(rule.param);
}

ChainOutcome run_chain(const SupplyChainInstance& instance,
                       const DaRuleSpec& rule, ProtocolKind protocol,
                       const ChainRunOptions& options) {
  instance.validate();
  if (!rule.ic() && !options.allow_non_ic) {
    throw BadParameter("rule '" + rule.name() +
                       "' is not incentive compatible; running it in a "
                       "chain requires the explicit override");
  }
  if (protocol != ProtocolKind::symmetric && !rule.non_discriminating()) {
    throw RuleNotND("protocol '" + protocol_name(protocol) +
                    "' requires a non-discriminating rule, got '" +
                    rule.name() + "'");
  }
  std::optional<int> coin = resolve_coin(rule, options);

  int t = instance.goods;
  std::vector<std::unique_ptr<Node>> nodes;
  for (int m = 0; m <= t; ++m) {
    PriceCurve local =
        PriceCurve::from_bids(instance.kind_of(m), instance.market(m));
    std::unique_ptr<Node> node;
    switch (protocol) {
      case ProtocolKind::symmetric:
        node = std::make_unique<SymmetricNode>(m, t, rule, std::move(local));
        break;
      case ProtocolKind::pivot:
        node = std::make_unique<PivotNode>(m, t, rule, std::move(local));
        break;
      case ProtocolKind::pivot_logn:
        node = std::make_unique<PivotLognNode>(m, t, rule, std::move(local));
        break;
    }
    if (m == t && coin.has_value()) node->preset_coin(*coin);
    nodes.push_back(std::move(node));
  }

  ChainOutcome out;
  Network net(t + 1, &out.trace, options.scheduler_seed);
  net.run(nodes);

  for (int m = 0; m <= t; ++m) {
    const NodeReport& rep = nodes[m]->report();
    if (!rep.applied) throw Error("protocol stalled before completing");
    out.per_market_q.push_back(rep.q);
    out.winners.push_back(rep.winners);
    for (std::size_t i = 0; i < rep.winners.size(); ++i) {
      out.transfers[rep.winners[i]] = rep.transfers[i];
      out.revenue += rep.transfers[i];
    }
    for (const AgentId& a : nodes[m]->dropped()) out.dropped.push_back(a);
  }
  out.q = out.per_market_q.back();
  out.consistent = std::all_of(
      out.per_market_q.begin(), out.per_market_q.end(),
      [&](int q) { return q == out.per_market_q.front(); });
  out.coin = coin;
  return out;
}

}  // namespace chainauction
