#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "kicktop/classical.hpp"
#include "kicktop/entropy.hpp"
#include "kicktop/errors.hpp"
#include "kicktop/husimi.hpp"
#include "kicktop/pseudo.hpp"

namespace kicktop {

// All numeric output funnels through here: 17 significant digits, general
// form, so every double round-trips and reruns are byte-identical.
inline std::string fmt(double v) {
  std::array<char, 64> buf;
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline std::string fmt(long long v) { return std::to_string(v); }

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

struct OutputFile {
  std::string path;
  std::size_t bytes = 0;
  std::string digest;  // fnv1a64 hex
};

inline OutputFile write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw EngineError("short write to " + path.string());
  return {path.string(), content.size(), hex64(fnv1a64(content))};
}

// ---- CSV readers -----------------------------------------------------------

// Reads an expectation-trace CSV (header n,jx,jy,jz); rows must be dense in n
// starting at 0.
inline std::vector<std::array<double, 3>> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read trace file " + path.string());
  std::vector<std::array<double, 3>> trace;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("n,", 0) == 0) continue;  // header
    }
    std::array<double, 4> vals{};
    std::size_t pos = 0;
    for (int c = 0; c < 4; ++c) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? comma : comma - pos);
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), vals[c]);
      if (res.ec != std::errc{})
        throw ConfigError("malformed trace row in " + path.string() + ": '" + line + "'");
      if (comma == std::string::npos && c < 3)
        throw ConfigError("trace row with fewer than 4 columns in " + path.string());
      pos = comma + 1;
    }
    if (static_cast<std::size_t>(vals[0]) != trace.size())
      throw ConfigError("trace rows out of order in " + path.string());
    trace.push_back({vals[1], vals[2], vals[3]});
  }
  if (trace.empty()) throw ConfigError("empty trace file " + path.string());
  return trace;
}

// ---- CSV builders ----------------------------------------------------------

inline std::string trace_csv(const std::vector<std::array<double, 3>>& trace) {
  std::string s = "n,jx,jy,jz\n";
  for (std::size_t n = 0; n < trace.size(); ++n) {
    s += fmt(static_cast<long long>(n));
    for (const double v : trace[n]) {
      s += ',';
      s += fmt(v);
    }
    s += '\n';
  }
  return s;
}

inline std::string entropy_csv(const EntropyTrace& trace) {
  std::string s = "n,s\n";
  for (std::size_t n = 0; n < trace.values.size(); ++n)
    s += fmt(static_cast<long long>(n)) + "," + fmt(trace.values[n]) + "\n";
  return s;
}

// Header row carries the theta nodes, first column the phi nodes, so the body
// is one row per phi value.
inline std::string husimi_csv(const HusimiGrid& grid) {
  std::string s;
  for (long long a = 0; a < grid.n_theta; ++a) {
    s += ',';
    s += fmt(grid.theta_nodes[a]);
  }
  s += '\n';
  for (long long b = 0; b < grid.n_phi; ++b) {
    s += fmt(grid.phi_nodes[b]);
    for (long long a = 0; a < grid.n_theta; ++a) {
      s += ',';
      s += fmt(grid.values(a, b));
    }
    s += '\n';
  }
  return s;
}

inline std::string field_csv(const EntropyField& field) {
  std::string s;
  for (long long a = 0; a < field.grid_n; ++a) {
    s += ',';
    s += fmt(field.theta_nodes[a]);
  }
  s += '\n';
  for (long long b = 0; b < field.grid_n; ++b) {
    s += fmt(field.phi_nodes[b]);
    for (long long a = 0; a < field.grid_n; ++a) {
      s += ',';
      s += fmt(field.values(a, b));
    }
    s += '\n';
  }
  return s;
}

inline std::string pointset_csv(const std::vector<WeightedPointSet>& snapshots) {
  std::string s = "step,theta,phi,re_amp,im_amp\n";
  for (std::size_t n = 0; n < snapshots.size(); ++n) {
    for (const auto& e : snapshots[n].entries) {
      s += fmt(static_cast<long long>(n)) + "," + fmt(e.point.theta) + "," + fmt(e.point.phi) +
           "," + fmt(e.amp.real()) + "," + fmt(e.amp.imag()) + "\n";
    }
  }
  return s;
}

inline std::string portrait_csv(const std::vector<Trajectory>& trajectories) {
  std::string s = "trajectory,step,theta,phi\n";
  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    const auto& traj = trajectories[t];
    for (std::size_t n = 0; n < traj.points.size(); ++n) {
      const SphericalPoint& p = traj.points[n];
      s += fmt(static_cast<long long>(t)) + "," + fmt(static_cast<long long>(n)) + "," +
           fmt(p.theta) + "," + fmt(p.phi) + "\n";
    }
  }
  return s;
}

}  // namespace kicktop
