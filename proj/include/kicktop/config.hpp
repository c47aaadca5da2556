#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kicktop/entropy.hpp"
#include "kicktop/errors.hpp"
#include "kicktop/floquet.hpp"
#include "kicktop/geometry.hpp"

namespace kicktop {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_real(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw ConfigError(what + ": cannot parse real number '" + text + "'");
  return v;
}

inline long long parse_int(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw ConfigError(what + ": cannot parse integer '" + text + "'");
  return v;
}

// Angles in units of pi: "0.7pi", "pi/2", "2pi/3", "-pi", "0.5*pi", or a
// plain radian value like "1.25".
inline double parse_angle(const std::string& text, const std::string& what) {
  std::string t;
  for (const char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ConfigError(what + ": empty angle");
  const std::size_t at = t.find("pi");
  if (at == std::string::npos) return parse_real(t, what);

  std::string coef = t.substr(0, at);
  std::string rest = t.substr(at + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (coef == "-") c = -1.0;
  else if (!coef.empty() && coef != "+") c = parse_real(coef, what);

  double div = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError(what + ": malformed angle '" + text + "'");
    div = parse_real(rest.substr(1), what);
    if (div == 0.0) throw ConfigError(what + ": division by zero in angle '" + text + "'");
  }
  return c * pi / div;
}

inline SphericalPoint parse_point(const std::string& text, const std::string& what) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw ConfigError(what + ": expected 'theta, phi', got '" + text + "'");
  const double th = parse_angle(text.substr(0, comma), what + " theta");
  const double ph = parse_angle(text.substr(comma + 1), what + " phi");
  try {
    return canonical(th, ph);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

inline std::pair<long long, long long> parse_fraction(const std::string& text,
                                                      const std::string& what) {
  const std::string t = trim(text);
  const std::size_t slash = t.find('/');
  if (slash == std::string::npos)
    throw ConfigError(what + ": expected 'r/s', got '" + text + "'");
  return {parse_int(t.substr(0, slash), what + " numerator"),
          parse_int(t.substr(slash + 1), what + " denominator")};
}

// Flat key-value experiment description.  Raw strings are kept verbatim so
// parse -> serialize -> parse is idempotent; typed accessors parse on demand.
class ExperimentConfig {
 public:
  static const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "kind",  "engine", "j",       "alpha",   "beta",    "beta_res", "delta",  "init",
        "steps", "tau",    "stride",  "grid_n",  "n_theta", "n_phi",    "seeds",  "target",
        "r",     "s",      "point",   "tol",     "format",  "workers",  "out"};
    return keys;
  }

  static ExperimentConfig parse(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      std::string line = trim(text.substr(pos, nl == std::string_view::npos ? nl : nl - pos));
      pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
        section = trim(std::string_view(line).substr(1, line.size() - 2));
        if (section != "experiment")
          throw ConfigError("config line " + std::to_string(line_no) + ": unknown section [" +
                            section + "]");
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
      cfg.set(trim(std::string_view(line).substr(0, eq)),
              trim(std::string_view(line).substr(eq + 1)));
    }
    return cfg;
  }

  void set(const std::string& key, const std::string& value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown config key '" + key + "'");
    kv_[key] = value;
  }

  std::string serialize() const {
    std::string out = "[experiment]\n";
    for (const auto& key : known_keys()) {
      const auto it = kv_.find(key);
      if (it != kv_.end()) out += key + " = " + it->second + "\n";
    }
    return out;
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  const std::string& raw(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing required config key '" + key + "'");
    return it->second;
  }

  std::string raw_or(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  // ---- typed accessors ----

  std::string kind() const {
    const std::string k = raw("kind");
    static const std::set<std::string> kinds = {"evolve",   "husimi", "entropy",
                                               "field",    "portrait", "verify"};
    if (!kinds.count(k)) throw ConfigError("kind: unknown experiment kind '" + k + "'");
    return k;
  }

  Engine engine() const {
    const std::string e = raw_or("engine", "quantum");
    if (e == "quantum") return Engine::Quantum;
    if (e == "classical") return Engine::Classical;
    if (e == "pseudoclassical") return Engine::Pseudoclassical;
    throw ConfigError("engine: unknown engine '" + e + "'");
  }

  long long j() const {
    const long long v = parse_int(raw("j"), "j");
    if (v < 1) throw ConfigError("j: must be a positive integer");
    return v;
  }

  double alpha() const { return parse_angle(raw("alpha"), "alpha"); }

  BetaSpec beta_spec() const {
    const bool has_abs = has("beta");
    const bool has_res = has("beta_res");
    if (has_abs == has_res)
      throw ConfigError("beta: exactly one of 'beta' or 'beta_res' must be set");
    if (has_abs) return BetaSpec::absolute(parse_angle(raw("beta"), "beta"));
    const auto [r, s] = parse_fraction(raw("beta_res"), "beta_res");
    const double delta = has("delta") ? parse_angle(raw("delta"), "delta") : 0.0;
    return BetaSpec::resonance(r, s, delta);
  }

  SphericalPoint init() const { return parse_point(raw("init"), "init"); }

  long long steps() const {
    const long long v = parse_int(raw("steps"), "steps");
    if (v < 0) throw ConfigError("steps: must be >= 0");
    return v;
  }

  long long steps_or(long long fallback) const {
    return has("steps") ? steps() : fallback;
  }

  long long tau() const {
    const long long v = parse_int(raw_or("tau", "100"), "tau");
    if (v < 1) throw ConfigError("tau: must be >= 1");
    return v;
  }

  long long stride() const {
    const long long v = parse_int(raw_or("stride", "1"), "stride");
    if (v < 1) throw ConfigError("stride: must be >= 1");
    return v;
  }

  long long grid_n() const {
    const long long v = parse_int(raw_or("grid_n", "51"), "grid_n");
    if (v < 2) throw ConfigError("grid_n: must be >= 2");
    return v;
  }

  long long n_theta() const {
    const long long v = parse_int(raw_or("n_theta", "201"), "n_theta");
    if (v < 2) throw ConfigError("n_theta: must be >= 2");
    return v;
  }

  long long n_phi() const {
    const long long v = parse_int(raw_or("n_phi", "201"), "n_phi");
    if (v < 2) throw ConfigError("n_phi: must be >= 2");
    return v;
  }

  long long seeds() const {
    const long long v = parse_int(raw_or("seeds", "120"), "seeds");
    if (v < 1) throw ConfigError("seeds: must be >= 1");
    return v;
  }

  std::string target() const { return raw("target"); }

  long long r() const { return parse_int(raw("r"), "r"); }
  long long s() const { return parse_int(raw("s"), "s"); }

  double tol_or(double fallback) const {
    return has("tol") ? parse_real(raw("tol"), "tol") : fallback;
  }

  std::string format() const {
    const std::string f = raw_or("format", "csv");
    if (f != "csv" && f != "json") throw ConfigError("format: must be csv or json");
    return f;
  }

  unsigned workers() const {
    if (has("workers")) {
      const long long v = parse_int(raw("workers"), "workers");
      if (v < 1) throw ConfigError("workers: must be >= 1");
      return static_cast<unsigned>(v);
    }
    if (const char* env = std::getenv("KICKTOP_WORKERS")) {
      try {
        const long long v = parse_int(env, "KICKTOP_WORKERS");
        if (v >= 1) return static_cast<unsigned>(v);
      } catch (const ConfigError&) {
        // fall through to the default on a malformed environment value
      }
    }
    return 1;
  }

  std::string out_dir() const { return raw_or("out", "runs/" + raw("kind")); }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace kicktop
