#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "idnc/engine.hpp"

namespace idnc {

// How the feedback-erasure mean tracks the packet-erasure mean P.
enum class QRule { Half, Equal, Double, ThreeHalves, Explicit };

double apply_q_rule(QRule rule, double explicit_q, double p);

enum class SweepAxis { M, N, P };

struct SweepSpec {
  SweepAxis axis = SweepAxis::M;
  std::vector<double> values;  // axis values (integral for M/N)
  int fixed_m = 0;             // required unless axis == M
  int fixed_n = 0;             // required unless axis == N
  double fixed_p = 0.0;        // required unless axis == P
  QRule q_rule = QRule::Equal;
  double explicit_q = 0.0;
  int iterations = 0;
  std::uint64_t root_seed = 1;
  double halfwidth = 0.1;
  std::vector<GraphMode> modes{GraphMode::GIDNC, GraphMode::LGIDNC};
  int round_cap_factor = 50;  // round cap = factor * N
};

struct ParseError {
  int line = 0;  // 0 when not tied to a config line
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ParseError> errors);
  const std::vector<ParseError>& errors() const { return errors_; }

 private:
  static std::string format(const std::vector<ParseError>& errors);
  std::vector<ParseError> errors_;
};

// Parses the flat key=value sweep configuration ('#' starts a comment).
// Collects every problem before failing so one run reports them all.
SweepSpec parse_config(const std::string& text);

// One (M, N, P, Q) grid point realized from the spec.
struct SweepPoint {
  int m = 0;
  int n = 0;
  double p = 0.0;
  double q = 0.0;
};

SweepPoint realize_point(const SweepSpec& spec, double axis_value);

// All iterations of one mode at one point; entries are aligned across
// modes (same index = same channel draw and episode seed).
struct ModeSamples {
  GraphMode mode = GraphMode::GIDNC;
  std::vector<double> per_user_delay;  // episode total / M
  std::vector<std::uint8_t> truncated;
};

struct PointSamples {
  SweepPoint point;
  std::vector<ModeSamples> modes;
};

// Runs every iteration of every requested mode at one sweep point. The
// channel draw and episode seed for iteration t are derived from
// (root_seed, point_index, t) only, so all modes face identical channels
// and reruns reproduce exactly, independent of `jobs`.
PointSamples run_point(const SweepSpec& spec, int point_index,
                       const SweepPoint& point, int jobs = 1,
                       const std::function<void(const EpisodeResult&,
                                                GraphMode, int)>* observer =
                           nullptr);

struct SweepRow {
  GraphMode mode = GraphMode::GIDNC;
  int m = 0;
  int n = 0;
  double p = 0.0;
  double q = 0.0;
  int iterations = 0;
  double mean_delay_per_user = 0.0;
  double stderr_delay = 0.0;
  int truncated = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

SweepRow summarize(const SweepPoint& point, int iterations,
                   const ModeSamples& samples);

SweepResult run_sweep(const SweepSpec& spec, int jobs = 1);

std::string csv_string(const SweepResult& result);
void write_csv(const SweepResult& result, const std::string& path);

}  // namespace idnc
