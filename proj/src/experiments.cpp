#include "idnc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace idnc {

double apply_q_rule(QRule rule, double explicit_q, double p) {
  switch (rule) {
    case QRule::Half: return p / 2.0;
    case QRule::Equal: return p;
    case QRule::Double: return 2.0 * p;
    case QRule::ThreeHalves: return 1.5 * p;
    case QRule::Explicit: return explicit_q;
  }
  return explicit_q;  // unreachable
}

ConfigError::ConfigError(std::vector<ParseError> errors)
    : std::runtime_error(format(errors)), errors_(std::move(errors)) {}

std::string ConfigError::format(const std::vector<ParseError>& errors) {
  std::ostringstream os;
  os << "invalid sweep configuration:";
  for (const auto& e : errors) {
    os << "\n  ";
    if (e.line > 0) os << "line " << e.line << ": ";
    os << e.message;
  }
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(c));
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, long long& out) {
  try {
    std::size_t used = 0;
    out = std::stoll(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_uint64(const std::string& s, std::uint64_t& out) {
  try {
    std::size_t used = 0;
    out = std::stoull(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

struct RawConfig {
  std::map<std::string, std::pair<int, std::string>> entries;  // key -> (line, value)

  int line_of(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.first;
  }
};

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::M: return "M";
    case SweepAxis::N: return "N";
    case SweepAxis::P: return "P";
  }
  return "?";
}

}  // namespace

SweepSpec parse_config(const std::string& text) {
  std::vector<ParseError> errors;
  RawConfig raw;

  static const std::vector<std::string> known = {
      "axis", "values", "m",    "n",         "p",               "q",
      "iterations",     "modes", "seed",     "halfwidth",
      "round_cap_factor"};

  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back({line_no, "expected key = value, got '" + line + "'"});
      continue;
    }
    std::string key = lower(trim(line.substr(0, eq)));
    std::string value = trim(line.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      errors.push_back({line_no, "unknown key '" + key + "'"});
      continue;
    }
    if (raw.entries.count(key)) {
      errors.push_back({line_no, "duplicate key '" + key + "'"});
      continue;
    }
    if (value.empty()) {
      errors.push_back({line_no, "empty value for '" + key + "'"});
      continue;
    }
    raw.entries.emplace(key, std::make_pair(line_no, value));
  }

  SweepSpec spec;
  auto fail = [&](const std::string& key, const std::string& message) {
    errors.push_back({raw.line_of(key), message});
  };

  // axis
  bool have_axis = false;
  if (!raw.entries.count("axis")) {
    errors.push_back({0, "missing required field: axis"});
  } else {
    std::string a = lower(raw.entries["axis"].second);
    if (a == "m") spec.axis = SweepAxis::M;
    else if (a == "n") spec.axis = SweepAxis::N;
    else if (a == "p") spec.axis = SweepAxis::P;
    else { fail("axis", "axis must be one of M, N, P"); }
    have_axis = (a == "m" || a == "n" || a == "p");
  }

  // values
  if (!raw.entries.count("values")) {
    errors.push_back({0, "missing required field: values"});
  } else {
    bool item_error = false;
    for (const std::string& item : split_list(raw.entries["values"].second)) {
      double v = 0.0;
      if (!parse_double(item, v)) {
        fail("values", "cannot parse value '" + item + "'");
        item_error = true;
        continue;
      }
      spec.values.push_back(v);
    }
    if (spec.values.empty() && !item_error)
      fail("values", "values list is empty");
  }

  // fixed parameters; the axis's own value must come from `values`
  auto need_fixed_int = [&](const std::string& key, SweepAxis owner,
                            int& out) {
    bool is_axis = have_axis && spec.axis == owner;
    if (raw.entries.count(key)) {
      if (is_axis) {
        fail(key, std::string(axis_name(owner)) +
                      " is the sweep axis; remove the fixed value");
        return;
      }
      long long v = 0;
      if (!parse_int(raw.entries[key].second, v) || v < 1)
        fail(key, key + " must be a positive integer");
      else
        out = static_cast<int>(v);
    } else if (!is_axis) {
      errors.push_back({0, "missing required field: " + key});
    }
  };
  need_fixed_int("m", SweepAxis::M, spec.fixed_m);
  need_fixed_int("n", SweepAxis::N, spec.fixed_n);

  {
    bool is_axis = have_axis && spec.axis == SweepAxis::P;
    if (raw.entries.count("p")) {
      if (is_axis) {
        fail("p", "P is the sweep axis; remove the fixed value");
      } else {
        double v = 0.0;
        if (!parse_double(raw.entries["p"].second, v))
          fail("p", "cannot parse P");
        else if (v <= 0.0 || v >= 0.8)
          fail("p", "P must lie in (0, 0.8)");
        else
          spec.fixed_p = v;
      }
    } else if (!is_axis) {
      errors.push_back({0, "missing required field: p"});
    }
  }

  if (have_axis && spec.axis == SweepAxis::P) {
    for (double v : spec.values)
      if (v <= 0.0 || v >= 0.8)
        fail("values", "P value " + std::to_string(v) + " outside (0, 0.8)");
  }
  if (have_axis && spec.axis != SweepAxis::P) {
    for (double v : spec.values)
      if (v != std::floor(v) || v < 1.0) {
        fail("values", std::string(axis_name(spec.axis)) +
                           " values must be positive integers");
        break;
      }
  }

  // Q rule
  if (!raw.entries.count("q")) {
    errors.push_back({0, "missing required field: q"});
  } else {
    std::string qs = lower(raw.entries["q"].second);
    if (qs == "half") spec.q_rule = QRule::Half;
    else if (qs == "equal") spec.q_rule = QRule::Equal;
    else if (qs == "double") spec.q_rule = QRule::Double;
    else if (qs == "three_halves" || qs == "threehalves")
      spec.q_rule = QRule::ThreeHalves;
    else {
      double v = 0.0;
      if (!parse_double(qs, v)) {
        fail("q",
             "Q must be half, equal, double, three_halves, or a number");
      } else if (v <= 0.0 || v >= 0.8) {
        fail("q", "explicit Q must lie in (0, 0.8)");
      } else {
        spec.q_rule = QRule::Explicit;
        spec.explicit_q = v;
      }
    }
  }

  // iterations
  if (!raw.entries.count("iterations")) {
    errors.push_back({0, "missing required field: iterations"});
  } else {
    long long v = 0;
    if (!parse_int(raw.entries["iterations"].second, v) || v < 1)
      fail("iterations", "iterations must be a positive integer");
    else
      spec.iterations = static_cast<int>(v);
  }

  // optional knobs
  if (raw.entries.count("seed")) {
    if (!parse_uint64(raw.entries["seed"].second, spec.root_seed))
      fail("seed", "seed must be a non-negative integer");
  }
  if (raw.entries.count("halfwidth")) {
    double v = 0.0;
    if (!parse_double(raw.entries["halfwidth"].second, v) || v < 0.0 ||
        v >= 0.5)
      fail("halfwidth", "halfwidth must lie in [0, 0.5)");
    else
      spec.halfwidth = v;
  }
  if (raw.entries.count("round_cap_factor")) {
    long long v = 0;
    if (!parse_int(raw.entries["round_cap_factor"].second, v) || v < 1)
      fail("round_cap_factor", "round_cap_factor must be a positive integer");
    else
      spec.round_cap_factor = static_cast<int>(v);
  }
  if (raw.entries.count("modes")) {
    spec.modes.clear();
    for (const std::string& item : split_list(raw.entries["modes"].second)) {
      std::string m = lower(item);
      if (m == "gidnc") spec.modes.push_back(GraphMode::GIDNC);
      else if (m == "lgidnc") spec.modes.push_back(GraphMode::LGIDNC);
      else fail("modes", "unknown mode '" + item + "'");
    }
    std::sort(spec.modes.begin(), spec.modes.end());
    spec.modes.erase(std::unique(spec.modes.begin(), spec.modes.end()),
                     spec.modes.end());
    if (spec.modes.empty()) fail("modes", "modes list is empty");
  }

  // realized-point validation: every (P, Q) pair the sweep will touch
  if (errors.empty()) {
    for (double v : spec.values) {
      SweepPoint pt = realize_point(spec, v);
      char buf[160];
      if (pt.q <= 0.0 || pt.q >= 0.8) {
        std::snprintf(buf, sizeof(buf),
                      "realized Q = %g at P = %g violates 0 < Q < 0.8", pt.q,
                      pt.p);
        fail("q", buf);
      }
      if (pt.p - spec.halfwidth < 0.0 || pt.p + spec.halfwidth >= 1.0) {
        std::snprintf(buf, sizeof(buf),
                      "P = %g with halfwidth %g leaves [0, 1)", pt.p,
                      spec.halfwidth);
        fail("halfwidth", buf);
      }
      if (pt.q - spec.halfwidth < 0.0 || pt.q + spec.halfwidth >= 1.0) {
        std::snprintf(buf, sizeof(buf),
                      "Q = %g with halfwidth %g leaves [0, 1)", pt.q,
                      spec.halfwidth);
        fail("halfwidth", buf);
      }
    }
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return spec;
}

SweepPoint realize_point(const SweepSpec& spec, double axis_value) {
  SweepPoint pt;
  pt.m = spec.fixed_m;
  pt.n = spec.fixed_n;
  pt.p = spec.fixed_p;
  switch (spec.axis) {
    case SweepAxis::M: pt.m = static_cast<int>(axis_value); break;
    case SweepAxis::N: pt.n = static_cast<int>(axis_value); break;
    case SweepAxis::P: pt.p = axis_value; break;
  }
  pt.q = apply_q_rule(spec.q_rule, spec.explicit_q, pt.p);
  return pt;
}

PointSamples run_point(const SweepSpec& spec, int point_index,
                       const SweepPoint& point, int jobs,
                       const std::function<void(const EpisodeResult&,
                                                GraphMode, int)>* observer) {
  PointSamples out;
  out.point = point;
  for (GraphMode mode : spec.modes) {
    ModeSamples s;
    s.mode = mode;
    s.per_user_delay.assign(spec.iterations, 0.0);
    s.truncated.assign(spec.iterations, 0);
    out.modes.push_back(std::move(s));
  }

  auto run_iteration = [&](int t) {
    std::uint64_t param_seed = derive_stream_seed(
        spec.root_seed, 2ull * static_cast<unsigned>(point_index), t);
    std::uint64_t episode_seed = derive_stream_seed(
        spec.root_seed, 2ull * static_cast<unsigned>(point_index) + 1, t);
    RngStream draw(param_seed);
    ChannelParams params = draw_user_probabilities(
        point.p, point.q, spec.halfwidth, point.m, draw);
    for (std::size_t mi = 0; mi < spec.modes.size(); ++mi) {
      EpisodeConfig cfg;
      cfg.users = point.m;
      cfg.packets = point.n;
      cfg.params = params;
      cfg.mode = spec.modes[mi];
      cfg.round_cap = spec.round_cap_factor * point.n;
      cfg.seed = episode_seed;
      cfg.record_trace = observer != nullptr;
      EpisodeResult r = run_episode(cfg);
      out.modes[mi].per_user_delay[t] =
          static_cast<double>(r.ledger.total) / point.m;
      out.modes[mi].truncated[t] = r.truncated ? 1 : 0;
      if (observer) (*observer)(r, spec.modes[mi], t);
    }
  };

  if (jobs <= 1 || observer != nullptr || spec.iterations == 1) {
    for (int t = 0; t < spec.iterations; ++t) run_iteration(t);
    return out;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      int t = next.fetch_add(1);
      if (t >= spec.iterations) return;
      try {
        run_iteration(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  int n_threads = std::min(jobs, spec.iterations);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

SweepRow summarize(const SweepPoint& point, int iterations,
                   const ModeSamples& samples) {
  SweepRow row;
  row.mode = samples.mode;
  row.m = point.m;
  row.n = point.n;
  row.p = point.p;
  row.q = point.q;
  row.iterations = iterations;

  double sum = 0.0;
  int n = 0;
  for (std::size_t t = 0; t < samples.per_user_delay.size(); ++t) {
    if (samples.truncated[t]) {
      ++row.truncated;
      continue;
    }
    sum += samples.per_user_delay[t];
    ++n;
  }
  if (n > 0) row.mean_delay_per_user = sum / n;
  if (n > 1) {
    double ss = 0.0;
    for (std::size_t t = 0; t < samples.per_user_delay.size(); ++t) {
      if (samples.truncated[t]) continue;
      double d = samples.per_user_delay[t] - row.mean_delay_per_user;
      ss += d * d;
    }
    row.stderr_delay = std::sqrt(ss / (static_cast<double>(n) * (n - 1)));
  }
  return row;
}

SweepResult run_sweep(const SweepSpec& spec, int jobs) {
  std::vector<PointSamples> points;
  points.reserve(spec.values.size());
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi)
    points.push_back(run_point(spec, static_cast<int>(vi),
                               realize_point(spec, spec.values[vi]), jobs));

  SweepResult result;
  for (std::size_t mi = 0; mi < spec.modes.size(); ++mi)
    for (const PointSamples& ps : points)
      result.rows.push_back(
          summarize(ps.point, spec.iterations, ps.modes[mi]));
  return result;
}

namespace {

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string csv_string(const SweepResult& result) {
  std::string out =
      "mode,M,N,P,Q,iterations,mean_delay_per_user,stderr,truncated\n";
  for (const SweepRow& r : result.rows) {
    out += to_string(r.mode);
    out += ',' + std::to_string(r.m) + ',' + std::to_string(r.n);
    out += ',' + fmt6(r.p) + ',' + fmt6(r.q);
    out += ',' + std::to_string(r.iterations);
    out += ',' + fmt6(r.mean_delay_per_user) + ',' + fmt6(r.stderr_delay);
    out += ',' + std::to_string(r.truncated);
    out += '\n';
  }
  return out;
}

void write_csv(const SweepResult& result, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("write_csv: cannot open '" + path +
                             "' for writing");
  file << csv_string(result);
  file.flush();
  if (!file)
    throw std::runtime_error("write_csv: failed while writing '" + path + "'");
}

}  // namespace idnc
