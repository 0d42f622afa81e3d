#include "idnc/engine.hpp"

#include <sstream>

#include "idnc/probability.hpp"

namespace idnc {

void run_initial_phase(const EpisodeConfig& cfg, GroundTruth& truth,
                       FeedbackMatrix& F, RngStream& rng) {
  for (PacketId j = 0; j < cfg.packets; ++j) {
    for (UserId i = 0; i < cfg.users; ++i) {
      bool received = sample_reception(cfg.params.forward[i], rng);
      bool ack_heard = false;
      if (received) {
        truth.set_has(i, j);
        ack_heard = sample_feedback(cfg.params.feedback[i], rng);
      }
      if (received && ack_heard)
        F.set_entry(i, j, EntryState::Has);
      else
        F.set_entry(i, j, EntryState::Uncertain, 1);
    }
  }
}

std::optional<PacketId> attempt_decode(const GroundTruth& truth, UserId i,
                                       std::span<const PacketId> packets) {
  PacketId missing = -1;
  int missing_count = 0;
  for (PacketId j : packets) {
    if (!truth.has(i, j)) {
      missing = j;
      if (++missing_count > 1) return std::nullopt;
    }
  }
  if (missing_count == 1) return missing;
  return std::nullopt;  // non-innovative (0 missing) stays undecoded too
}

int account_delay(const GroundTruth& truth, UserId i, bool received,
                  const std::optional<PacketId>& decoded) {
  if (!received) return 0;
  if (!truth.wants_nonempty(i)) return 0;
  return decoded.has_value() ? 0 : 1;
}

RoundOutcome run_recovery_round(const EpisodeConfig& cfg, GroundTruth& truth,
                                FeedbackMatrix& F, RngStream& rng,
                                DelayLedger& ledger) {
  assert(!F.is_complete());

  BeliefTables tables(F, cfg.params);
  std::vector<Vertex> verts = enumerate_vertices(F, tables);
  Clique clique = greedy_max_weight_clique(cfg.mode, tables, F, verts);

  RoundOutcome out;
  out.transmission = clique_to_transmission(clique, verts);
  out.received.assign(cfg.users, 0);
  out.decoded.assign(cfg.users, -1);
  out.delayed.assign(cfg.users, 0);
  out.feedback_heard.assign(cfg.users, 0);

  // Broadcast: every user samples its own channel; all receivers decode
  // opportunistically, targeted or not.
  for (UserId i = 0; i < cfg.users; ++i)
    out.received[i] = sample_reception(cfg.params.forward[i], rng) ? 1 : 0;

  for (UserId i = 0; i < cfg.users; ++i) {
    std::optional<PacketId> decoded;
    if (out.received[i])
      decoded = attempt_decode(truth, i, out.transmission.packets);
    int delta = account_delay(truth, i, out.received[i] != 0, decoded);
    out.delayed[i] = static_cast<std::uint8_t>(delta);
    ledger.add(i, delta);
    if (decoded) {
      truth.set_has(i, *decoded);
      out.decoded[i] = *decoded;
    }
  }

  // Feedback: every targeted attempt counts against its intended packet;
  // a heard acknowledgement resolves the whole row and resets the counts.
  for (const auto& [user, intended] : out.transmission.targets) {
    F.record_attempt(user, intended);
    if (!out.received[user]) continue;
    bool acks = !cfg.ack_requires_decode || out.decoded[user] >= 0;
    if (!acks) continue;
    if (sample_feedback(cfg.params.feedback[user], rng)) {
      F.resolve_from_feedback(user, truth);
      out.feedback_heard[user] = 1;
    }
  }
  return out;
}

EpisodeResult run_episode(const EpisodeConfig& cfg) {
  GroundTruth truth(cfg.users, cfg.packets);
  FeedbackMatrix F(cfg.users, cfg.packets);
  RngStream rng(cfg.seed);

  EpisodeResult result;
  result.ledger = DelayLedger(cfg.users);

  run_initial_phase(cfg, truth, F, rng);

  int cap = cfg.effective_round_cap();
  while (!F.is_complete() && result.rounds < cap) {
    RoundOutcome out = run_recovery_round(cfg, truth, F, rng, result.ledger);
    ++result.rounds;
    if (cfg.record_trace) result.trace.push_back(std::move(out));
  }
  result.truncated = !F.is_complete();
  return result;
}

std::string format_round(const RoundOutcome& r, int round_index) {
  std::ostringstream os;
  os << "round=" << round_index << " xor=";
  for (std::size_t a = 0; a < r.transmission.packets.size(); ++a)
    os << (a ? "+" : "") << r.transmission.packets[a];
  os << " targets=";
  for (std::size_t a = 0; a < r.transmission.targets.size(); ++a)
    os << (a ? "," : "") << r.transmission.targets[a].first << ':'
       << r.transmission.targets[a].second;
  os << " rx=";
  for (std::uint8_t b : r.received) os << (b ? '1' : '0');
  os << " decoded=";
  bool first = true;
  for (std::size_t i = 0; i < r.decoded.size(); ++i) {
    if (r.decoded[i] < 0) continue;
    os << (first ? "" : ",") << i << ':' << r.decoded[i];
    first = false;
  }
  if (first) os << "-";
  os << " delayed=";
  for (std::uint8_t b : r.delayed) os << (b ? '1' : '0');
  os << " heard=";
  first = true;
  for (std::size_t i = 0; i < r.feedback_heard.size(); ++i) {
    if (!r.feedback_heard[i]) continue;
    os << (first ? "" : ",") << i;
    first = false;
  }
  if (first) os << "-";
  return os.str();
}

}  // namespace idnc
