#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "kicktop/errors.hpp"
#include "kicktop/geometry.hpp"
#include "kicktop/pseudo.hpp"

namespace kicktop {

enum class Relation { Equal, Case1, Case2 };

inline Relation parse_relation(const std::string& name) {
  if (name == "equal") return Relation::Equal;
  if (name == "case1") return Relation::Case1;
  if (name == "case2") return Relation::Case2;
  throw ConfigError("relation: expected equal, case1, or case2, got '" + name + "'");
}

struct CompareReport {
  std::vector<std::array<double, 3>> residuals;
  double max_residual = 0;
  long long argmax_step = 0;
  int argmax_component = 0;
  double tol = 0;
  bool pass = true;
};

// Residuals of trace A against the relation-transformed reference trace B.
// For the sync relations B must be the detuned (beta = delta) reference; the
// tables hold at alpha = pi/2 and sign or zero each component per step.
inline CompareReport compare_traces(const std::vector<std::array<double, 3>>& a,
                                    const std::vector<std::array<double, 3>>& b,
                                    Relation relation, double tol,
                                    double alpha = 0.5 * pi) {
  if (a.size() != b.size())
    throw ConfigError("compare: trace lengths differ (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  if (a.empty()) throw ConfigError("compare: empty traces");
  CompareReport rep;
  rep.tol = tol;
  rep.residuals.reserve(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    std::array<double, 3> expect{};
    switch (relation) {
      case Relation::Equal: expect = b[n]; break;
      case Relation::Case1:
        expect = predict_sync_case1(b, static_cast<long long>(n), alpha);
        break;
      case Relation::Case2:
        expect = predict_sync_case2(b, static_cast<long long>(n), alpha);
        break;
    }
    std::array<double, 3> row{};
    for (int c = 0; c < 3; ++c) {
      row[c] = std::abs(a[n][c] - expect[c]);
      if (row[c] > rep.max_residual) {
        rep.max_residual = row[c];
        rep.argmax_step = static_cast<long long>(n);
        rep.argmax_component = c;
      }
    }
    rep.residuals.push_back(row);
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

}  // namespace kicktop
