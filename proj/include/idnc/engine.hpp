#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idnc/channel.hpp"
#include "idnc/clique.hpp"
#include "idnc/graph.hpp"
#include "idnc/state.hpp"

namespace idnc {

struct EpisodeConfig {
  int users = 0;    // M
  int packets = 0;  // N
  ChannelParams params;
  GraphMode mode = GraphMode::GIDNC;
  int round_cap = 0;  // recovery rounds before truncation; 0 = 50 * packets
  std::uint64_t seed = 0;
  // Acknowledge only transmissions the user decoded something from, instead
  // of every received one. Non-default variant; the default follows the
  // feedback-on-reception rule used by the targeted-user protocol.
  bool ack_requires_decode = false;
  bool record_trace = false;

  int effective_round_cap() const {
    return round_cap > 0 ? round_cap : 50 * packets;
  }
};

// Realized per-user decoding delay, one unit per user per bad reception.
struct DelayLedger {
  std::vector<int> per_user;
  long long total = 0;

  DelayLedger() = default;
  explicit DelayLedger(int users) : per_user(users, 0) {}

  void add(UserId i, int delta) {
    per_user[i] += delta;
    total += delta;
  }
};

// Trace record of one recovery transmission.
struct RoundOutcome {
  Transmission transmission;
  std::vector<std::uint8_t> received;        // per user
  std::vector<PacketId> decoded;             // per user, -1 = nothing new
  std::vector<std::uint8_t> delayed;         // per user
  std::vector<std::uint8_t> feedback_heard;  // per user (targeted only)
};

struct EpisodeResult {
  DelayLedger ledger;
  int rounds = 0;
  bool truncated = false;
  std::vector<RoundOutcome> trace;  // filled when cfg.record_trace
};

// Uncoded broadcast of every packet once. Each receiving user acknowledges
// per packet; entries whose packet and acknowledgement both went through
// become Has, everything else Uncertain with one recorded attempt.
void run_initial_phase(const EpisodeConfig& cfg, GroundTruth& truth,
                       FeedbackMatrix& F, RngStream& rng);

// What a receiving user gets out of an XOR combination: the single missing
// packet if exactly one operand is missing, nothing otherwise (the packet
// is then non-innovative or not instantly decodable).
std::optional<PacketId> attempt_decode(const GroundTruth& truth, UserId i,
                                       std::span<const PacketId> packets);

// One unit of decoding delay for a user that still needs packets, received
// the transmission, and gained nothing from it. `truth` must be the state
// before this round's decode is applied.
int account_delay(const GroundTruth& truth, UserId i, bool received,
                  const std::optional<PacketId>& decoded);

// One recovery transmission: graph-mode clique selection, broadcast,
// opportunistic decoding by every receiving user, delay accounting, and
// feedback/belief update for targeted users.
RoundOutcome run_recovery_round(const EpisodeConfig& cfg, GroundTruth& truth,
                                FeedbackMatrix& F, RngStream& rng,
                                DelayLedger& ledger);

// Full episode: initial phase, then recovery rounds until every entry is
// acknowledged or the round cap truncates the episode.
EpisodeResult run_episode(const EpisodeConfig& cfg);

// One-line trace rendering of a recovery round.
std::string format_round(const RoundOutcome& r, int round_index);

}  // namespace idnc
