#pragma once

#include <cassert>
#include <cstdint>
#include <random>
#include <vector>

namespace idnc {

// Per-user memoryless erasure probabilities, fixed for one frame delivery.
struct ChannelParams {
  std::vector<double> forward;   // packet erasure probability per user
  std::vector<double> feedback;  // acknowledgement erasure probability per user

  int users() const { return static_cast<int>(forward.size()); }

  static ChannelParams uniform(int users, double p, double q) {
    return {std::vector<double>(users, p), std::vector<double>(users, q)};
  }
};

// Stateless 64-bit mix (splitmix64 finalizer). Used to derive independent
// stream seeds from a root seed plus indices.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Splitting rule for parallel sweeps: every (root, a, b) triple names one
// independent stream, so episodes never share draws.
inline std::uint64_t derive_stream_seed(std::uint64_t root, std::uint64_t a,
                                        std::uint64_t b = 0) {
  return mix64(mix64(mix64(root) ^ a) ^ b);
}

// Seeded deterministic random stream; one per episode. Doubles are built
// from the raw engine output so sequences are identical on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) {
    assert(prob >= 0.0 && prob <= 1.0);
    return uniform01() < prob;
  }

  double uniform(double lo, double hi) {
    assert(lo <= hi);
    return lo + (hi - lo) * uniform01();
  }

 private:
  std::mt19937_64 engine_;
};

// True when the broadcast reaches a user with forward erasure p.
inline bool sample_reception(double p, RngStream& rng) {
  return !rng.bernoulli(p);
}

// True when a sent acknowledgement survives a feedback channel with
// erasure q. Only targeted users that received the transmission send one.
inline bool sample_feedback(double q, RngStream& rng) {
  return !rng.bernoulli(q);
}

// Draws per-user erasure probabilities uniformly around the sweep means
// (P, Q), one fresh set per iteration. The support must stay inside [0, 1).
ChannelParams draw_user_probabilities(double mean_p, double mean_q,
                                      double halfwidth, int users,
                                      RngStream& rng);

}  // namespace idnc
