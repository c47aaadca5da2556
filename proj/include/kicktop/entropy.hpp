#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "kicktop/coherent.hpp"
#include "kicktop/errors.hpp"
#include "kicktop/floquet.hpp"
#include "kicktop/gauss.hpp"
#include "kicktop/geometry.hpp"
#include "kicktop/pseudo.hpp"
#include "kicktop/spin.hpp"

namespace kicktop {

enum class Engine { Quantum, Classical, Pseudoclassical };

inline const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Quantum: return "quantum";
    case Engine::Classical: return "classical";
    default: return "pseudoclassical";
  }
}

struct EngineParams {
  long long j = 1;
  double alpha = 0;
  BetaSpec beta;
};

// Linear entropy of the one-qubit reduced state, S = (1 - |J|^2/j^2)/2.
inline double linear_entropy(double jx_val, double jy_val, double jz_val, long long j) {
  const double jj = static_cast<double>(j);
  const double len2 = jx_val * jx_val + jy_val * jy_val + jz_val * jz_val;
  if (len2 > jj * jj * (1.0 + 1e-6) * (1.0 + 1e-6))
    throw EngineError("expectation vector longer than j; entropy undefined");
  const double s = 0.5 * (1.0 - len2 / (jj * jj));
  return std::clamp(s, 0.0, 0.5);
}

struct EntropyTrace {
  std::vector<double> values;  // S(0) .. S(tau)
  std::string source;
};

namespace detail {
inline BranchTable branch_table_for(const BetaSpec& beta) {
  if (beta.kind != BetaSpec::Kind::Resonance)
    throw ConfigError("pseudoclassical engine needs beta in resonance form r/s + delta");
  return build_branch_table(beta.r, beta.s);
}
}  // namespace detail

inline EntropyTrace entropy_trace(Engine engine, const EngineParams& params,
                                  const SphericalPoint& init, long long tau) {
  if (tau < 0) throw ConfigError("tau must be >= 0");
  EntropyTrace trace;
  trace.source = engine_name(engine);
  trace.values.reserve(tau + 1);
  if (engine == Engine::Quantum) {
    SpinSpace sp(params.j);
    FloquetOperator op(sp, params.alpha, params.beta);
    Eigen::VectorXcd psi = coherent_state(sp, init);
    auto push = [&](const Eigen::VectorXcd& v) {
      const auto e = expectations(sp, v);
      trace.values.push_back(linear_entropy(e[0], e[1], e[2], params.j));
    };
    push(psi);
    for (long long n = 0; n < tau; ++n) {
      psi = op.step(psi);
      push(psi);
    }
  } else if (engine == Engine::Pseudoclassical) {
    const BranchTable table = detail::branch_table_for(params.beta);
    WeightedPointSet set;
    set.entries.push_back({canonical(init.theta, init.phi), 1.0});
    auto push = [&](const WeightedPointSet& s) {
      const auto e = pseudo_expectations(s, params.j);
      trace.values.push_back(linear_entropy(e[0], e[1], e[2], params.j));
    };
    push(set);
    for (long long n = 0; n < tau; ++n) {
      set = pseudo_step(set, params.alpha, params.beta.delta, table);
      push(set);
    }
  } else {
    throw ConfigError("entropy trace needs the quantum or pseudoclassical engine");
  }
  return trace;
}

// Time average over n = stride, 2*stride, ... <= tau; S(0) never contributes.
inline double s_tau(const EntropyTrace& trace, long long tau, long long stride = 1) {
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (tau < 1 || tau >= static_cast<long long>(trace.values.size()))
    throw ConfigError("tau outside trace range");
  if (stride > tau) throw ConfigError("stride exceeds tau: no sample at n >= 1");
  double acc = 0;
  long long count = 0;
  for (long long n = stride; n <= tau; n += stride) {
    acc += trace.values[n];
    ++count;
  }
  return acc / static_cast<double>(count);
}

struct EntropyField {
  long long grid_n = 0;
  std::vector<double> theta_nodes, phi_nodes;
  Eigen::MatrixXd values;  // grid_n x grid_n, row = theta index, NaN = failed node
  long long tau = 1, stride = 1;
  Engine engine = Engine::Quantum;
  EngineParams params;
};

// S_tau over an inclusive uniform grid in (Theta, Phi).  The quantum path
// evolves whole blocks of initial states through the one-step operator as
// matrix products; jz comes from |psi|^2 against m, the transverse pair from
// the ladder bilinear, so per-step observable cost stays linear in the block.
inline EntropyField entropy_field(Engine engine, const EngineParams& params, long long grid_n,
                                  long long tau, long long stride = 1, unsigned workers = 1) {
  if (grid_n < 2) throw ConfigError("field grid must be at least 2x2");
  if (tau < 1) throw ConfigError("tau must be >= 1");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (stride > tau) throw ConfigError("stride exceeds tau: no sample at n >= 1");

  EntropyField field;
  field.grid_n = grid_n;
  field.tau = tau;
  field.stride = stride;
  field.engine = engine;
  field.params = params;
  field.theta_nodes.resize(grid_n);
  field.phi_nodes.resize(grid_n);
  for (long long a = 0; a < grid_n; ++a) {
    field.theta_nodes[a] = pi * static_cast<double>(a) / static_cast<double>(grid_n - 1);
    field.phi_nodes[a] = 2.0 * pi * static_cast<double>(a) / static_cast<double>(grid_n - 1);
  }
  field.values.setConstant(grid_n, grid_n, std::numeric_limits<double>::quiet_NaN());

  const long long n_nodes = grid_n * grid_n;  // node id = theta_index * grid_n + phi_index
  const long long samples = tau / stride;

  if (engine == Engine::Quantum) {
    SpinSpace sp(params.j);
    FloquetOperator op(sp, params.alpha, params.beta);
    const long long dim = sp.dim();
    const Eigen::VectorXd& m_vec = sp.m_values();
    const Eigen::VectorXcd up_cx = sp.ladder_up().cast<cxd>();
    constexpr long long block_cols = 512;

    auto run_range = [&](long long node_begin, long long node_end) {
      Eigen::MatrixXcd block, scratch;
      for (long long lo = node_begin; lo < node_end; lo += block_cols) {
        const long long cols = std::min(block_cols, node_end - lo);
        block.resize(dim, cols);
        scratch.resize(dim, cols);
        for (long long c = 0; c < cols; ++c) {
          const long long node = lo + c;
          const SphericalPoint p = canonical(field.theta_nodes[node / grid_n],
                                             field.phi_nodes[node % grid_n]);
          block.col(c) = coherent_state(sp, p);
        }
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(cols);
        for (long long n = 1; n <= tau; ++n) {
          op.step_block(block, scratch);
          if (n % stride != 0) continue;
          for (long long c = 0; c < cols; ++c) {
            const auto col = block.col(c);
            const double jz = col.cwiseAbs2().dot(m_vec);
            const cxd jp = col.head(dim - 1)
                               .conjugate()
                               .cwiseProduct(col.tail(dim - 1))
                               .cwiseProduct(up_cx)
                               .sum();
            acc[c] += linear_entropy(jp.real(), jp.imag(), jz, params.j);
          }
        }
        for (long long c = 0; c < cols; ++c) {
          const long long node = lo + c;
          field.values(node / grid_n, node % grid_n) = acc[c] / static_cast<double>(samples);
        }
      }
    };
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_nodes)));
    if (n_workers == 1) {
      run_range(0, n_nodes);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(n_workers);
      for (unsigned w = 0; w < n_workers; ++w) {
        const long long lo = n_nodes * w / n_workers;
        const long long hi = n_nodes * (w + 1) / n_workers;
        pool.emplace_back(run_range, lo, hi);
      }
      for (auto& t : pool) t.join();
    }
  } else if (engine == Engine::Pseudoclassical) {
    const BranchTable table = detail::branch_table_for(params.beta);
    auto run_range = [&](long long node_begin, long long node_end) {
      for (long long node = node_begin; node < node_end; ++node) {
        const SphericalPoint p =
            canonical(field.theta_nodes[node / grid_n], field.phi_nodes[node % grid_n]);
        try {
          WeightedPointSet set;
          set.entries.push_back({p, 1.0});
          double acc = 0;
          for (long long n = 1; n <= tau; ++n) {
            set = pseudo_step(set, params.alpha, params.beta.delta, table);
            if (n % stride != 0) continue;
            const auto e = pseudo_expectations(set, params.j);
            acc += linear_entropy(e[0], e[1], e[2], params.j);
          }
          field.values(node / grid_n, node % grid_n) = acc / static_cast<double>(samples);
        } catch (const EngineError&) {
          // point-cap or similar blowup: leave the node as NaN
        }
      }
    };
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_nodes)));
    if (n_workers == 1) {
      run_range(0, n_nodes);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(n_workers);
      for (unsigned w = 0; w < n_workers; ++w) {
        const long long lo = n_nodes * w / n_workers;
        const long long hi = n_nodes * (w + 1) / n_workers;
        pool.emplace_back(run_range, lo, hi);
      }
      for (auto& t : pool) t.join();
    }
  } else {
    throw ConfigError("entropy field needs the quantum or pseudoclassical engine");
  }
  return field;
}

}  // namespace kicktop
