#include "idnc/state.hpp"

#include <stdexcept>

namespace idnc {

std::vector<PacketId> FeedbackMatrix::wants_set(UserId i) const {
  std::vector<PacketId> out;
  for (PacketId j = 0; j < packets_; ++j)
    if (entry(i, j) != EntryState::Has) out.push_back(j);
  return out;
}

std::vector<PacketId> FeedbackMatrix::uncertain_set(UserId i) const {
  std::vector<PacketId> out;
  for (PacketId j = 0; j < packets_; ++j)
    if (entry(i, j) == EntryState::Uncertain) out.push_back(j);
  return out;
}

void FeedbackMatrix::record_attempt(UserId i, PacketId j) {
  std::size_t at = index(i, j);
  if (entries_[at] == EntryState::Has)
    throw std::logic_error("record_attempt: packet already acknowledged");
  entries_[at] = EntryState::Uncertain;
  ++attempts_[at];
}

void FeedbackMatrix::resolve_from_feedback(UserId i, const GroundTruth& truth) {
  for (PacketId j = 0; j < packets_; ++j) {
    std::size_t at = index(i, j);
    EntryState next =
        truth.has(i, j) ? EntryState::Has : EntryState::WantsCertain;
    if (entries_[at] == EntryState::Has && next != EntryState::Has) ++non_has_;
    if (entries_[at] != EntryState::Has && next == EntryState::Has) --non_has_;
    entries_[at] = next;
    attempts_[at] = 0;
  }
}

std::string FeedbackMatrix::debug_string() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(users_) * (packets_ + 1));
  for (UserId i = 0; i < users_; ++i) {
    for (PacketId j = 0; j < packets_; ++j) {
      switch (entry(i, j)) {
        case EntryState::Has: out += '0'; break;
        case EntryState::WantsCertain: out += '1'; break;
        case EntryState::Uncertain: out += 'x'; break;
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace idnc
