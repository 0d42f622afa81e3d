#include <cmath>

#include "doctest.h"
#include "idnc/engine.hpp"
#include "test_util.hpp"

using namespace idnc;

namespace {

EpisodeConfig basic_config(int users, int packets, double p, double q,
                           GraphMode mode, std::uint64_t seed) {
  EpisodeConfig cfg;
  cfg.users = users;
  cfg.packets = packets;
  cfg.params = ChannelParams::uniform(users, p, q);
  cfg.mode = mode;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("initial phase on perfect channels acknowledges everything") {
  EpisodeConfig cfg = basic_config(3, 4, 0.0, 0.0, GraphMode::GIDNC, 1);
  GroundTruth truth(3, 4);
  FeedbackMatrix F(3, 4);
  RngStream rng(cfg.seed);
  run_initial_phase(cfg, truth, F, rng);
  CHECK(F.is_complete());
  CHECK(truth.complete());
}

TEST_CASE("initial phase on a dead forward channel leaves everything"
          " uncertain") {
  EpisodeConfig cfg = basic_config(2, 3, 1.0, 0.0, GraphMode::GIDNC, 1);
  GroundTruth truth(2, 3);
  FeedbackMatrix F(2, 3);
  RngStream rng(cfg.seed);
  run_initial_phase(cfg, truth, F, rng);
  for (UserId i = 0; i < 2; ++i)
    for (PacketId j = 0; j < 3; ++j) {
      CHECK(F.entry(i, j) == EntryState::Uncertain);
      CHECK(F.attempts(i, j) == 1);
      CHECK_FALSE(truth.has(i, j));
    }
}

TEST_CASE("initial phase acknowledgement rate is (1-p)(1-q)") {
  const int episodes = 200;
  int has_entries = 0;
  int total = 0;
  for (int e = 0; e < episodes; ++e) {
    EpisodeConfig cfg = basic_config(20, 20, 0.25, 0.25, GraphMode::GIDNC,
                                     derive_stream_seed(99, e));
    GroundTruth truth(20, 20);
    FeedbackMatrix F(20, 20);
    RngStream rng(cfg.seed);
    run_initial_phase(cfg, truth, F, rng);
    for (UserId i = 0; i < 20; ++i)
      for (PacketId j = 0; j < 20; ++j) {
        ++total;
        if (F.entry(i, j) == EntryState::Has) ++has_entries;
      }
  }
  double rate = static_cast<double>(has_entries) / total;
  CHECK(std::abs(rate - 0.5625) < 0.01);
}

TEST_CASE("decoding an XOR needs exactly one missing operand") {
  GroundTruth truth(1, 4);
  truth.set_has(0, 1);
  truth.set_has(0, 2);

  std::vector<PacketId> just_missing{0};
  CHECK(attempt_decode(truth, 0, just_missing) == PacketId{0});

  std::vector<PacketId> covered{0, 1};  // 1 held, 0 missing
  CHECK(attempt_decode(truth, 0, covered) == PacketId{0});

  std::vector<PacketId> two_missing{0, 3};
  CHECK_FALSE(attempt_decode(truth, 0, two_missing).has_value());

  std::vector<PacketId> nothing_new{1, 2};
  CHECK_FALSE(attempt_decode(truth, 0, nothing_new).has_value());
}

TEST_CASE("delay accounting follows the one-unit rule") {
  GroundTruth done(1, 2);
  done.set_has(0, 0);
  done.set_has(0, 1);
  // empty wants: never delayed
  CHECK(account_delay(done, 0, true, std::nullopt) == 0);

  GroundTruth wanting(1, 2);
  wanting.set_has(0, 0);
  // received but nothing decoded: one unit
  CHECK(account_delay(wanting, 0, true, std::nullopt) == 1);
  // erased transmission: nothing received, no delay
  CHECK(account_delay(wanting, 0, false, std::nullopt) == 0);
  // received and decoded something new: no delay
  CHECK(account_delay(wanting, 0, true, PacketId{1}) == 0);
}

TEST_CASE("perfect channels finish without delay or uncertainty") {
  for (GraphMode mode : {GraphMode::GIDNC, GraphMode::LGIDNC}) {
    EpisodeConfig cfg = basic_config(1, 5, 0.0, 0.0, mode, 7);
    EpisodeResult r = run_episode(cfg);
    CHECK(r.rounds == 0);  // the initial phase already completes the frame
    CHECK(r.ledger.total == 0);
    CHECK_FALSE(r.truncated);
  }

  // multi-user with losses off after a constructed incomplete start
  EpisodeConfig cfg = basic_config(3, 4, 0.0, 0.0, GraphMode::GIDNC, 8);
  GroundTruth truth(3, 4);
  FeedbackMatrix F(3, 4);
  F.set_entry(1, 2, EntryState::WantsCertain);
  for (UserId i = 0; i < 3; ++i)
    for (PacketId j = 0; j < 4; ++j)
      if (!(i == 1 && j == 2)) {
        F.set_entry(i, j, EntryState::Has);
        truth.set_has(i, j);
      }
  RngStream rng(1);
  DelayLedger ledger(3);
  int rounds = 0;
  while (!F.is_complete() && rounds < 10) {
    run_recovery_round(cfg, truth, F, rng, ledger);
    ++rounds;
  }
  CHECK(rounds == 1);
  CHECK(ledger.total == 0);
}

TEST_CASE("recovery rounds until one lossy packet lands follow a geometric"
          " law") {
  // single user, single missing packet known for sure, p = 1/2, q = 0:
  // two expected transmissions
  const int episodes = 10000;
  long long total_rounds = 0;
  for (int e = 0; e < episodes; ++e) {
    EpisodeConfig cfg = basic_config(1, 1, 0.5, 0.0, GraphMode::GIDNC,
                                     derive_stream_seed(11, e));
    GroundTruth truth(1, 1);
    FeedbackMatrix F(1, 1);  // starts WantsCertain
    RngStream rng(cfg.seed);
    DelayLedger ledger(1);
    int rounds = 0;
    while (!F.is_complete()) {
      run_recovery_round(cfg, truth, F, rng, ledger);
      ++rounds;
    }
    total_rounds += rounds;
    CHECK(ledger.total == 0);  // erasures never count, decodes always do
  }
  double mean = static_cast<double>(total_rounds) / episodes;
  CHECK(std::abs(mean - 2.0) < 0.05);
}

TEST_CASE("untargeted receivers with pending wants accrue delay") {
  // user 2 already holds both operand packets but still misses packet 2;
  // receiving the combination gains it nothing. Packet 2 stays out of the
  // clique because users 0 and 1 want it too.
  EpisodeConfig cfg = basic_config(3, 3, 0.0, 0.0, GraphMode::GIDNC, 3);
  GroundTruth truth(3, 3);
  FeedbackMatrix F(3, 3);
  auto fill = [&](UserId i, PacketId j, EntryState s) {
    F.set_entry(i, j, s);
    if (s == EntryState::Has) truth.set_has(i, j);
  };
  fill(0, 0, EntryState::WantsCertain);
  fill(0, 1, EntryState::Has);
  fill(0, 2, EntryState::WantsCertain);
  fill(1, 0, EntryState::Has);
  fill(1, 1, EntryState::WantsCertain);
  fill(1, 2, EntryState::WantsCertain);
  fill(2, 0, EntryState::Has);
  fill(2, 1, EntryState::Has);
  fill(2, 2, EntryState::WantsCertain);

  RngStream rng(1);
  DelayLedger ledger(3);
  RoundOutcome out = run_recovery_round(cfg, truth, F, rng, ledger);
  REQUIRE(out.transmission.packets == std::vector<PacketId>{0, 1});
  REQUIRE(out.transmission.targets ==
          std::vector<std::pair<UserId, PacketId>>{{0, 0}, {1, 1}});
  CHECK(out.delayed[0] == 0);
  CHECK(out.delayed[1] == 0);
  CHECK(out.delayed[2] == 1);
  CHECK(ledger.per_user[2] == 1);
}

TEST_CASE("acknowledged entries are always true in the ground truth") {
  RngStream seeds(505);
  for (int e = 0; e < 50; ++e) {
    EpisodeConfig cfg = basic_config(6, 6, 0.3, 0.4, GraphMode::LGIDNC,
                                     derive_stream_seed(505, e));
    GroundTruth truth(6, 6);
    FeedbackMatrix F(6, 6);
    RngStream rng(cfg.seed);
    run_initial_phase(cfg, truth, F, rng);
    DelayLedger ledger(6);
    int rounds = 0;
    while (!F.is_complete() && rounds < cfg.effective_round_cap()) {
      run_recovery_round(cfg, truth, F, rng, ledger);
      ++rounds;
      for (UserId i = 0; i < 6; ++i)
        for (PacketId j = 0; j < 6; ++j)
          if (F.entry(i, j) == EntryState::Has) CHECK(truth.has(i, j));
    }
    CHECK(F.is_complete());
  }
}

TEST_CASE("ledger totals match per-round increments") {
  EpisodeConfig cfg = basic_config(5, 6, 0.3, 0.5, GraphMode::GIDNC, 12);
  cfg.record_trace = true;
  EpisodeResult r = run_episode(cfg);
  long long replayed = 0;
  for (const RoundOutcome& round : r.trace)
    for (std::uint8_t d : round.delayed) replayed += d;
  long long from_users = 0;
  for (int d : r.ledger.per_user) from_users += d;
  CHECK(replayed == r.ledger.total);
  CHECK(from_users == r.ledger.total);
  CHECK(r.rounds == static_cast<int>(r.trace.size()));
}

TEST_CASE("episodes are a pure function of their configuration") {
  EpisodeConfig cfg = basic_config(8, 8, 0.25, 0.5, GraphMode::LGIDNC, 321);
  cfg.record_trace = true;
  EpisodeResult a = run_episode(cfg);
  EpisodeResult b = run_episode(cfg);
  CHECK(a.rounds == b.rounds);
  CHECK(a.ledger.total == b.ledger.total);
  CHECK(a.ledger.per_user == b.ledger.per_user);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k)
    CHECK(format_round(a.trace[k], k) == format_round(b.trace[k], k));
}

TEST_CASE("the round cap truncates and reports") {
  EpisodeConfig cfg = basic_config(4, 6, 0.6, 0.6, GraphMode::GIDNC, 5);
  cfg.round_cap = 2;
  EpisodeResult r = run_episode(cfg);
  CHECK(r.truncated);
  CHECK(r.rounds == 2);
}

TEST_CASE("acknowledge-on-decode variant withholds feedback on useless"
          " receptions") {
  // the user actually holds everything, but the sender still believes the
  // second packet is missing (stale after an opportunistic decode)
  auto stale_fixture = [](GroundTruth& truth, FeedbackMatrix& F) {
    truth.set_has(0, 0);
    truth.set_has(0, 1);
    F.set_entry(0, 0, EntryState::Has);
    F.set_entry(0, 1, EntryState::WantsCertain);
  };

  // variant rule: the retransmission decodes nothing, so no feedback goes
  // out and the entry degrades to uncertain
  EpisodeConfig variant = basic_config(1, 2, 0.0, 0.5, GraphMode::GIDNC, 9);
  variant.ack_requires_decode = true;
  GroundTruth truth(1, 2);
  FeedbackMatrix F(1, 2);
  stale_fixture(truth, F);
  RngStream rng(1);
  DelayLedger ledger(1);
  RoundOutcome out = run_recovery_round(variant, truth, F, rng, ledger);
  CHECK(out.received[0] == 1);
  CHECK(out.decoded[0] == -1);        // nothing new to decode
  CHECK(out.feedback_heard[0] == 0);  // variant: no decode, no feedback
  CHECK(F.entry(0, 1) == EntryState::Uncertain);
  CHECK(F.attempts(0, 1) == 1);

  // default rule: reception alone triggers feedback and resolves the row
  EpisodeConfig dflt = basic_config(1, 2, 0.0, 0.0, GraphMode::GIDNC, 9);
  GroundTruth truth2(1, 2);
  FeedbackMatrix F2(1, 2);
  stale_fixture(truth2, F2);
  RngStream rng2(1);
  RoundOutcome out2 = run_recovery_round(dflt, truth2, F2, rng2, ledger);
  CHECK(out2.received[0] == 1);
  CHECK(out2.decoded[0] == -1);
  CHECK(out2.feedback_heard[0] == 1);
  CHECK(F2.is_complete());
}

TEST_CASE("trace formatting is stable") {
  RoundOutcome r;
  r.transmission.packets = {0, 2};
  r.transmission.targets = {{0, 0}, {2, 2}};
  r.received = {1, 0, 1};
  r.decoded = {0, -1, -1};
  r.delayed = {0, 0, 1};
  r.feedback_heard = {1, 0, 0};
  CHECK(format_round(r, 4) ==
        "round=4 xor=0+2 targets=0:0,2:2 rx=101 decoded=0:0 delayed=001 "
        "heard=0");
}
