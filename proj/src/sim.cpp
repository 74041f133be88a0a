#include "ncsync/sim.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "json.hpp"

namespace ncsync {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::UDbs:
      return "U_DBS";
    case Scheme::CDbs:
      return "C_DBS";
    case Scheme::CDbsNs:
      return "C_DBS_NS";
  }
  return "?";
}

std::string_view scheme_flag(Scheme s) {
  switch (s) {
    case Scheme::UDbs:
      return "u-dbs";
    case Scheme::CDbs:
      return "c-dbs";
    case Scheme::CDbsNs:
      return "c-dbs-ns";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
  std::string norm(text);
  std::transform(norm.begin(), norm.end(), norm.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  for (Scheme s : kAllSchemes) {
    if (norm == scheme_flag(s)) return s;
  }
  return std::nullopt;
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Lost:
      return "lost";
    case Outcome::AlreadyKnown:
      return "already_known";
    case Outcome::Decoded:
      return "decoded";
    case Outcome::Undecodable:
      return "undecodable";
  }
  return "?";
}

Simulation::Simulation(const Topology& t, const BlockStore& store, const SimConfig& cfg)
    : topology_(t), store_(store), cfg_(cfg), rng_(cfg.seed) {
  if (!t.connected()) throw std::invalid_argument("simulation requires a connected topology");
  if (store.size() != t.size()) {
    throw std::invalid_argument("block store must hold exactly one block per node");
  }
  if (!(cfg.pe >= 0.0 && cfg.pe <= 1.0)) throw std::invalid_argument("pe must be in [0, 1]");
  if (cfg.max_slots < 0) throw std::invalid_argument("max_slots must be positive (or 0 for default)");
  max_slots_ = cfg.max_slots > 0 ? cfg.max_slots : 10 * t.size() * t.size();
  knowledge_.reserve(static_cast<std::size_t>(t.size()));
  for (NodeId n = 0; n < t.size(); ++n) knowledge_.emplace_back(n, t.size());
}

bool Simulation::synchronized() const {
  return std::all_of(knowledge_.begin(), knowledge_.end(), [](const KnowledgeSet& k) { return k.complete(); });
}

std::vector<ReceiverOutcome> Simulation::apply_broadcast(NodeId tx, const Packet& packet) {
  std::vector<ReceiverOutcome> outcomes;
  topology_.neighbors(tx).for_each([&](NodeId rx) {
    // One draw per receiver regardless of pe keeps the stream aligned across pe values.
    const bool lost = uniform01(rng_) < cfg_.pe;
    if (lost) {
      outcomes.push_back({rx, Outcome::Lost});
      return;
    }
    KnowledgeSet& k = knowledge_[static_cast<std::size_t>(rx)];
    const Classification c = classify(packet, k, &counter_);
    if (std::holds_alternative<AlreadyKnown>(c)) {
      outcomes.push_back({rx, Outcome::AlreadyKnown});
    } else if (std::holds_alternative<Undecodable>(c)) {
      outcomes.push_back({rx, Outcome::Undecodable});
    } else {
      Decoded d = decode(packet, k, store_, &counter_);
      if (d.payload != store_.payload(d.block)) {
        throw ContractViolation("decoded payload of block " + std::to_string(d.block) +
                                " differs from the original");
      }
      k.insert(d.block);
      outcomes.push_back({rx, Outcome::Decoded, d.block});
    }
  });
  return outcomes;
}

SlotEvent Simulation::transmit(NodeId tx, BlockSet chosen) {
  const Packet packet = encode(chosen, store_, &counter_);
  SlotEvent e{++slots_, tx, chosen, apply_broadcast(tx, packet)};
  if (cfg_.record_events) events_.push_back(e);
  return e;
}

std::optional<SlotEvent> Simulation::step_cyclic() {
  if (cfg_.scheme == Scheme::CDbsNs) throw ContractViolation("step_cyclic: scheme is not cyclic");
  const NodeId tx = cursor_;
  cursor_ = (cursor_ + 1) % topology_.size();
  const DbsResult r = cfg_.scheme == Scheme::UDbs ? dbs_single(tx, knowledge_, topology_, &counter_)
                                                  : dbs(tx, knowledge_, topology_, &counter_, cfg_.search_cap);
  if (r.beta == 0) {
    ++idle_turns_;
    return std::nullopt;
  }
  return transmit(tx, r.chosen);
}

SlotEvent Simulation::step_ns() {
  if (synchronized()) throw ContractViolation("step_ns: network already synchronized");
  const NsResult r = ns(knowledge_, topology_, &counter_, cfg_.search_cap);
  const DbsResult& pick = r.per_node[static_cast<std::size_t>(r.chosen_node)].dbs;
  if (pick.beta == 0) throw ContractViolation("step_ns: no node can help any neighbor");
  return transmit(r.chosen_node, pick.chosen);
}

void Simulation::run_to_completion() {
  int consecutive_idle = 0;
  while (!synchronized() && slots_ < max_slots_) {
    if (cfg_.scheme == Scheme::CDbsNs) {
      step_ns();
      continue;
    }
    if (step_cyclic()) {
      consecutive_idle = 0;
    } else if (++consecutive_idle >= topology_.size()) {
      throw ContractViolation("full TDMA cycle without a useful transmission");
    }
  }
}

SimResult Simulation::result() const {
  return SimResult{slots_, synchronized(), events_, counter_.count(), knowledge_, idle_turns_};
}

SimResult run(const Topology& t, const SimConfig& cfg, const BlockStore& store) {
  Simulation sim(t, store, cfg);
  sim.run_to_completion();
  return sim.result();
}

SimResult run(const Topology& t, const SimConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, {0x5107E}));
  const BlockStore store = BlockStore::random(t.size(), cfg.payload_len, rng);
  return run(t, cfg, store);
}

std::string to_json_line(const SlotEvent& e) {
  nlohmann::ordered_json j;
  j["slot"] = e.slot;
  j["tx"] = e.tx;
  j["components"] = e.components.to_vector();
  j["outcomes"] = nlohmann::ordered_json::array();
  for (const auto& o : e.outcomes) {
    nlohmann::ordered_json oj;
    oj["rx"] = o.rx;
    oj["result"] = outcome_name(o.result);
    if (o.result == Outcome::Decoded) oj["block"] = o.block;
    j["outcomes"].push_back(std::move(oj));
  }
  return j.dump();
}

void write_trace(const std::vector<SlotEvent>& events, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file " + path.string());
  for (const auto& e : events) out << to_json_line(e) << '\n';
}

std::vector<SlotEvent> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trace file " + path.string());
  std::vector<SlotEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    SlotEvent e;
    e.slot = j.at("slot").get<int>();
    e.tx = j.at("tx").get<int>();
    e.components = BlockSet::of(j.at("components").get<std::vector<int>>());
    for (const auto& oj : j.at("outcomes")) {
      ReceiverOutcome o;
      o.rx = oj.at("rx").get<int>();
      const auto name = oj.at("result").get<std::string>();
      bool known = false;
      for (Outcome c : {Outcome::Lost, Outcome::AlreadyKnown, Outcome::Decoded, Outcome::Undecodable}) {
        if (name == outcome_name(c)) {
          o.result = c;
          known = true;
        }
      }
      if (!known) throw std::runtime_error(path.string() + ": unknown outcome '" + name + "'");
      if (o.result == Outcome::Decoded) o.block = oj.at("block").get<int>();
      e.outcomes.push_back(o);
    }
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace ncsync
