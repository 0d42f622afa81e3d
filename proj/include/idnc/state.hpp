#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace idnc {

using UserId = int;    // user index in [0, M)
using PacketId = int;  // packet index in [0, N)

// Sender-side knowledge about one (user, packet) pair.
enum class EntryState : std::uint8_t {
  Has,           // reception acknowledged
  WantsCertain,  // known missing
  Uncertain,     // attempted at least once, no feedback heard since
};

// The simulator's omniscient record of what each user actually holds.
// Hidden from the sender; packets are never forgotten within an episode.
class GroundTruth {
 public:
  GroundTruth(int users, int packets)
      : users_(users),
        packets_(packets),
        has_(static_cast<std::size_t>(users) * packets, 0),
        missing_(users, packets) {}

  int users() const { return users_; }
  int packets() const { return packets_; }

  bool has(UserId i, PacketId j) const { return has_[index(i, j)] != 0; }

  // Monotone: a packet, once held, stays held.
  void set_has(UserId i, PacketId j) {
    std::uint8_t& cell = has_[index(i, j)];
    if (!cell) {
      cell = 1;
      --missing_[static_cast<std::size_t>(i)];
    }
  }

  int missing_count(UserId i) const {
    return missing_[static_cast<std::size_t>(i)];
  }
  bool wants_nonempty(UserId i) const { return missing_count(i) > 0; }

  bool complete() const {
    for (int m : missing_)
      if (m > 0) return false;
    return true;
  }

 private:
  std::size_t index(UserId i, PacketId j) const {
    assert(i >= 0 && i < users_ && j >= 0 && j < packets_);
    return static_cast<std::size_t>(i) * packets_ + j;
  }

  int users_;
  int packets_;
  std::vector<std::uint8_t> has_;
  std::vector<int> missing_;
};

// The sender's belief matrix: per-entry state plus the count of
// unacknowledged attempts behind every Uncertain entry.
//
// Invariants kept by the mutators:
//   attempts(i,j) >= 1  iff  entry(i,j) == Uncertain
//   attempts(i,j) == 0  otherwise
class FeedbackMatrix {
 public:
  // A fresh matrix: the sender knows the users hold nothing yet.
  FeedbackMatrix(int users, int packets)
      : users_(users),
        packets_(packets),
        entries_(static_cast<std::size_t>(users) * packets,
                 EntryState::WantsCertain),
        attempts_(static_cast<std::size_t>(users) * packets, 0),
        non_has_(static_cast<std::size_t>(users) * packets) {}

  int users() const { return users_; }
  int packets() const { return packets_; }

  EntryState entry(UserId i, PacketId j) const { return entries_[index(i, j)]; }
  int attempts(UserId i, PacketId j) const { return attempts_[index(i, j)]; }

  // Test/fixture setter; keeps the attempts invariant.
  void set_entry(UserId i, PacketId j, EntryState s, int lambda = 0) {
    assert((s == EntryState::Uncertain) ? lambda >= 1 : lambda == 0);
    std::size_t at = index(i, j);
    if (entries_[at] == EntryState::Has && s != EntryState::Has) ++non_has_;
    if (entries_[at] != EntryState::Has && s == EntryState::Has) --non_has_;
    entries_[at] = s;
    attempts_[at] = lambda;
  }

  // Packets the sender cannot count as delivered (WantsCertain or Uncertain).
  std::vector<PacketId> wants_set(UserId i) const;

  // Packets whose delivery is unresolved at the sender.
  std::vector<PacketId> uncertain_set(UserId i) const;

  // Registers one targeted, so-far-unacknowledged attempt on (i, j).
  // A WantsCertain entry becomes Uncertain with one attempt; an Uncertain
  // entry gains one. Attempting an acknowledged packet is a caller bug.
  void record_attempt(UserId i, PacketId j);

  // Applies a successfully heard full-state feedback from user i: the row
  // becomes Has/WantsCertain according to truth and its attempts reset.
  void resolve_from_feedback(UserId i, const GroundTruth& truth);

  // True once every entry is acknowledged.
  bool is_complete() const { return non_has_ == 0; }

  std::size_t non_has_count() const { return non_has_; }

  bool row_wants_nonempty(UserId i) const {
    for (PacketId j = 0; j < packets_; ++j)
      if (entries_[index(i, j)] != EntryState::Has) return true;
    return false;
  }

  // One row per user: '0' acknowledged, '1' known missing, 'x' uncertain.
  std::string debug_string() const;

 private:
  std::size_t index(UserId i, PacketId j) const {
    assert(i >= 0 && i < users_ && j >= 0 && j < packets_);
    return static_cast<std::size_t>(i) * packets_ + j;
  }

  int users_;
  int packets_;
  std::vector<EntryState> entries_;
  std::vector<int> attempts_;
  std::size_t non_has_;
};

}  // namespace idnc
