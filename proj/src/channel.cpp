#include "idnc/channel.hpp"

#include <stdexcept>
#include <string>

namespace idnc {

ChannelParams draw_user_probabilities(double mean_p, double mean_q,
                                      double halfwidth, int users,
                                      RngStream& rng) {
  if (halfwidth < 0.0)
    throw std::invalid_argument("draw_user_probabilities: negative halfwidth");
  auto check_support = [&](double mean, const char* name) {
    if (mean - halfwidth < 0.0 || mean + halfwidth >= 1.0)
      throw std::invalid_argument(
          std::string("draw_user_probabilities: support of ") + name +
          " leaves [0, 1)");
  };
  check_support(mean_p, "P");
  check_support(mean_q, "Q");

  ChannelParams params;
  params.forward.reserve(users);
  params.feedback.reserve(users);
  for (int i = 0; i < users; ++i) {
    params.forward.push_back(
        rng.uniform(mean_p - halfwidth, mean_p + halfwidth));
    params.feedback.push_back(
        rng.uniform(mean_q - halfwidth, mean_q + halfwidth));
  }
  return params;
}

}  // namespace idnc
