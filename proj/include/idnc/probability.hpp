#pragma once

#include <cassert>
#include <span>
#include <vector>

#include "idnc/channel.hpp"
#include "idnc/state.hpp"

namespace idnc {

// Comparison tolerance for computed expected delays; ties count as equal.
inline constexpr double kDelayTolerance = 1e-9;

// x^n by binary exponentiation; deterministic across libm versions.
inline double ipow(double x, int n) {
  assert(n >= 0);
  double acc = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

// Posterior probability that a packet is still missing at a user after
// `lambda` targeted attempts with no feedback heard since the last heard
// one. Forward erasure p, feedback erasure q. With lambda = 0 nothing has
// been attempted and the packet is surely still needed.
double innovative_probability(double p, double q, int lambda);

// The same posterior extended to every entry state: an acknowledged packet
// is never innovative, a known-missing one always is.
double effective_innovative_probability(EntryState state, double p, double q,
                                        int lambda);

// Per-entry shorthand reading state and attempts from the matrix.
double entry_innovative_probability(const FeedbackMatrix& F,
                                    const ChannelParams& params, UserId i,
                                    PacketId j);

// Probability that user i still misses at least one packet of the frame,
// i.e. one minus the product of per-packet "surely delivered" factors.
double still_needs_probability(const FeedbackMatrix& F,
                               const ChannelParams& params, UserId i);

// Precomputed per-round belief quantities shared by the delay kernels,
// graph construction and clique selection.
struct BeliefTables {
  int users = 0;
  int packets = 0;
  std::vector<double> innovative;    // users x packets, row-major
  std::vector<double> still_needs;   // per user
  std::vector<double> delay_factor;  // (1 - p_i) * still_needs[i]
  std::vector<double> delivery;      // 1 - p_i

  BeliefTables() = default;
  BeliefTables(const FeedbackMatrix& F, const ChannelParams& params);

  double innovative_at(UserId i, PacketId j) const {
    return innovative[static_cast<std::size_t>(i) * packets + j];
  }
};

// Expected decoding-delay increments caused at the two users of a vertex
// pair by sending packet j alone, packet l alone, or their XOR.
struct PairDelays {
  double single_j = 0.0;
  double single_l = 0.0;
  double xored = 0.0;
};

// Kernel over precomputed tables; both the public wrappers and the graph
// builders funnel through this so all routes agree bit for bit.
inline PairDelays pair_delay_kernel(double factor_i, double factor_k,
                                    double xi_j, double xi_l, double xk_j,
                                    double xk_l) {
  PairDelays d;
  d.single_j = factor_i * (1.0 - xi_j) + factor_k * (1.0 - xk_j);
  d.single_l = factor_i * (1.0 - xi_l) + factor_k * (1.0 - xk_l);
  d.xored = factor_i * (xi_j * xi_l + (1.0 - xi_j) * (1.0 - xi_l)) +
            factor_k * (xk_j * xk_l + (1.0 - xk_j) * (1.0 - xk_l));
  return d;
}

PairDelays expected_pair_delays(const BeliefTables& t, UserId i, PacketId j,
                                UserId k, PacketId l);

// Expected delay of sending packet m in {j, l} alone, summed over the two
// users of vertices (i, j) and (k, l). Requires i != k and j != l.
double expected_pair_delay_single(const FeedbackMatrix& F,
                                  const ChannelParams& params, UserId i,
                                  PacketId j, UserId k, PacketId l,
                                  PacketId m);

// Expected delay of sending j XOR l, summed over the same two users.
double expected_pair_delay_xor(const FeedbackMatrix& F,
                               const ChannelParams& params, UserId i,
                               PacketId j, UserId k, PacketId l);

// Expected delay increment at user i of an arbitrary XOR combination:
// the user is delayed when the transmission arrives, is not decodable into
// exactly one innovative packet, and the user still needs something.
double expected_delay_combination(const FeedbackMatrix& F,
                                  const ChannelParams& params,
                                  std::span<const PacketId> kappa, UserId i);

double expected_delay_combination(const BeliefTables& t,
                                  std::span<const PacketId> kappa, UserId i);

// Sum of the per-user combination delays over every user whose row still
// has unacknowledged entries.
double total_expected_combination_delay(const FeedbackMatrix& F,
                                        const ChannelParams& params,
                                        std::span<const PacketId> kappa);

}  // namespace idnc
