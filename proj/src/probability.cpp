#include "idnc/probability.hpp"

#include <stdexcept>

namespace idnc {

double innovative_probability(double p, double q, int lambda) {
  assert(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0 && lambda >= 0);
  if (lambda == 0) return 1.0;
  double denom = p + (1.0 - p) * q;
  if (denom == 0.0)
    throw std::domain_error(
        "innovative_probability: attempts without any feedback opportunity "
        "(p = q = 0) cannot stay unacknowledged");
  return ipow(p / denom, lambda);
}

double effective_innovative_probability(EntryState state, double p, double q,
                                        int lambda) {
  switch (state) {
    case EntryState::Has: return 0.0;
    case EntryState::WantsCertain: return 1.0;
    case EntryState::Uncertain: return innovative_probability(p, q, lambda);
  }
  return 0.0;  // unreachable
}

double entry_innovative_probability(const FeedbackMatrix& F,
                                    const ChannelParams& params, UserId i,
                                    PacketId j) {
  return effective_innovative_probability(F.entry(i, j), params.forward[i],
                                          params.feedback[i], F.attempts(i, j));
}

double still_needs_probability(const FeedbackMatrix& F,
                               const ChannelParams& params, UserId i) {
  double all_delivered = 1.0;
  for (PacketId j = 0; j < F.packets(); ++j)
    all_delivered *= 1.0 - entry_innovative_probability(F, params, i, j);
  return 1.0 - all_delivered;
}

BeliefTables::BeliefTables(const FeedbackMatrix& F,
                           const ChannelParams& params)
    : users(F.users()),
      packets(F.packets()),
      innovative(static_cast<std::size_t>(F.users()) * F.packets()),
      still_needs(F.users()),
      delay_factor(F.users()),
      delivery(F.users()) {
  for (UserId i = 0; i < users; ++i) {
    double p = params.forward[i];
    double q = params.feedback[i];
    double all_delivered = 1.0;
    for (PacketId j = 0; j < packets; ++j) {
      double x = effective_innovative_probability(F.entry(i, j), p, q,
                                                  F.attempts(i, j));
      innovative[static_cast<std::size_t>(i) * packets + j] = x;
      all_delivered *= 1.0 - x;
    }
    still_needs[i] = 1.0 - all_delivered;
    delivery[i] = 1.0 - p;
    delay_factor[i] = delivery[i] * still_needs[i];
  }
}

PairDelays expected_pair_delays(const BeliefTables& t, UserId i, PacketId j,
                                UserId k, PacketId l) {
  assert(i != k && j != l);
  return pair_delay_kernel(t.delay_factor[i], t.delay_factor[k],
                           t.innovative_at(i, j), t.innovative_at(i, l),
                           t.innovative_at(k, j), t.innovative_at(k, l));
}

double expected_pair_delay_single(const FeedbackMatrix& F,
                                  const ChannelParams& params, UserId i,
                                  PacketId j, UserId k, PacketId l,
                                  PacketId m) {
  assert(m == j || m == l);
  BeliefTables t(F, params);
  PairDelays d = expected_pair_delays(t, i, j, k, l);
  return m == j ? d.single_j : d.single_l;
}

double expected_pair_delay_xor(const FeedbackMatrix& F,
                               const ChannelParams& params, UserId i,
                               PacketId j, UserId k, PacketId l) {
  BeliefTables t(F, params);
  return expected_pair_delays(t, i, j, k, l).xored;
}

double expected_delay_combination(const BeliefTables& t,
                                  std::span<const PacketId> kappa, UserId i) {
  assert(!kappa.empty());
  // P(exactly one packet of kappa is innovative), treating per-packet
  // innovativeness as independent.
  double exactly_one = 0.0;
  for (std::size_t a = 0; a < kappa.size(); ++a) {
    double term = t.innovative_at(i, kappa[a]);
    for (std::size_t b = 0; b < kappa.size(); ++b)
      if (b != a) term *= 1.0 - t.innovative_at(i, kappa[b]);
    exactly_one += term;
  }
  return t.delivery[i] * (1.0 - exactly_one) * t.still_needs[i];
}

double expected_delay_combination(const FeedbackMatrix& F,
                                  const ChannelParams& params,
                                  std::span<const PacketId> kappa, UserId i) {
  BeliefTables t(F, params);
  return expected_delay_combination(t, kappa, i);
}

double total_expected_combination_delay(const FeedbackMatrix& F,
                                        const ChannelParams& params,
                                        std::span<const PacketId> kappa) {
  BeliefTables t(F, params);
  double total = 0.0;
  for (UserId i = 0; i < F.users(); ++i)
    if (F.row_wants_nonempty(i))
      total += expected_delay_combination(t, kappa, i);
  return total;
}

}  // namespace idnc
