#pragma once

#include <chrono>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kicktop/classical.hpp"
#include "kicktop/coherent.hpp"
#include "kicktop/compare.hpp"
#include "kicktop/config.hpp"
#include "kicktop/entropy.hpp"
#include "kicktop/errors.hpp"
#include "kicktop/floquet.hpp"
#include "kicktop/gauss.hpp"
#include "kicktop/husimi.hpp"
#include "kicktop/io.hpp"
#include "kicktop/pseudo.hpp"
#include "kicktop/spin.hpp"

namespace kicktop {

inline constexpr const char* kVersion = "1.0.0";

struct RunManifest {
  std::string kind;
  nlohmann::json resolved;  // fully resolved parameters
  double seconds = 0;
  std::vector<OutputFile> outputs;

  nlohmann::json to_json() const {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : outputs)
      files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.digest}});
    return {{"tool", "kicktop"},
            {"version", kVersion},
            {"kind", kind},
            {"resolved", resolved},
            {"seconds", seconds},
            {"outputs", files}};
  }
};

namespace detail {

inline std::filesystem::path prepare_out_dir(const ExperimentConfig& cfg) {
  const std::filesystem::path dir = cfg.out_dir();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("out: cannot create output directory " + dir.string());
  // Probe writability now so engine work never starts against a dead sink.
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("out: output directory not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
  return dir;
}

inline nlohmann::json beta_json(const BetaSpec& beta, long long j) {
  if (beta.kind == BetaSpec::Kind::Absolute)
    return {{"form", "absolute"}, {"value", beta.value}};
  return {{"form", "resonance"},
          {"r", beta.r},
          {"s", beta.s},
          {"delta", beta.delta},
          {"resolved", beta.resolve(j)}};
}

inline nlohmann::json trace_json_payload(const std::vector<std::array<double, 3>>& trace) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : trace) rows.push_back({row[0], row[1], row[2]});
  return rows;
}

}  // namespace detail

// Dispatches one configured experiment, writes its outputs plus manifest.json,
// and returns the manifest.  Log lines go to `log`; numeric payloads only ever
// go to files.
inline RunManifest run(const ExperimentConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string kind = cfg.kind();
  const std::filesystem::path dir = detail::prepare_out_dir(cfg);
  const std::string format = cfg.format();

  RunManifest manifest;
  manifest.kind = kind;
  manifest.resolved["config"] = nlohmann::json::object();
  for (const auto& key : ExperimentConfig::known_keys())
    if (cfg.has(key)) manifest.resolved["config"][key] = cfg.raw(key);
  manifest.resolved["format"] = format;
  manifest.resolved["out"] = dir.string();

  auto emit = [&](const std::filesystem::path& name, const std::string& content) {
    manifest.outputs.push_back(write_text(dir / name, content));
    log << "wrote " << (dir / name).string() << " (" << content.size() << " bytes)\n";
  };

  if (kind == "evolve") {
    const Engine engine = cfg.engine();
    const long long j = cfg.j();
    const double alpha = cfg.alpha();
    const BetaSpec beta = cfg.beta_spec();
    const SphericalPoint init = cfg.init();
    const long long steps = cfg.steps();
    manifest.resolved["engine"] = engine_name(engine);
    manifest.resolved["beta"] = detail::beta_json(beta, j);

    if (engine == Engine::Quantum) {
      SpinSpace sp(j);
      FloquetOperator op(sp, alpha, beta);
      const auto trace = evolve_trace(op, coherent_state(sp, init), steps);
      if (format == "json") {
        nlohmann::json out = {{"kind", "evolve"},
                              {"engine", "quantum"},
                              {"steps", steps},
                              {"trace", detail::trace_json_payload(trace)}};
        emit("trace.json", out.dump(2) + "\n");
      } else {
        emit("trace.csv", trace_csv(trace));
      }
    } else if (engine == Engine::Classical) {
      const Trajectory traj = classical_trajectory(init, alpha, beta.resolve(j), steps);
      std::vector<std::array<double, 3>> trace;
      trace.reserve(traj.points.size());
      const double jj = static_cast<double>(j);
      for (const auto& p : traj.points) {
        const Vec3 u = to_unit_vector(p);
        trace.push_back({jj * u.x, jj * u.y, jj * u.z});
      }
      if (format == "json") {
        nlohmann::json out = {{"kind", "evolve"},
                              {"engine", "classical"},
                              {"steps", steps},
                              {"trace", detail::trace_json_payload(trace)}};
        emit("trace.json", out.dump(2) + "\n");
      } else {
        emit("trace.csv", trace_csv(trace));
      }
    } else {
      const BranchTable table = detail::branch_table_for(beta);
      manifest.resolved["n_branches"] = table.branches.size();
      WeightedPointSet set;
      set.entries.push_back({cfg.init(), 1.0});
      std::vector<WeightedPointSet> snapshots{set};
      std::vector<std::array<double, 3>> trace{pseudo_expectations(set, j)};
      for (long long n = 0; n < steps; ++n) {
        set = pseudo_step(set, alpha, beta.delta, table);
        snapshots.push_back(set);
        trace.push_back(pseudo_expectations(set, j));
      }
      if (format == "json") {
        nlohmann::json points = nlohmann::json::array();
        for (const auto& snap : snapshots) {
          nlohmann::json step = nlohmann::json::array();
          for (const auto& e : snap.entries)
            step.push_back({{"theta", e.point.theta},
                            {"phi", e.point.phi},
                            {"re_amp", e.amp.real()},
                            {"im_amp", e.amp.imag()}});
          points.push_back(step);
        }
        nlohmann::json out = {{"kind", "evolve"},
                              {"engine", "pseudoclassical"},
                              {"steps", steps},
                              {"trace", detail::trace_json_payload(trace)},
                              {"points", points}};
        emit("trace.json", out.dump(2) + "\n");
      } else {
        emit("trace.csv", trace_csv(trace));
        emit("points.csv", pointset_csv(snapshots));
      }
    }
  } else if (kind == "husimi") {
    if (cfg.engine() != Engine::Quantum)
      throw ConfigError("engine: husimi snapshots need the quantum engine");
    const long long j = cfg.j();
    const double alpha = cfg.alpha();
    const BetaSpec beta = cfg.beta_spec();
    const long long steps = cfg.steps_or(0);
    manifest.resolved["beta"] = detail::beta_json(beta, j);
    manifest.resolved["workers"] = cfg.workers();
    SpinSpace sp(j);
    FloquetOperator op(sp, alpha, beta);
    Eigen::VectorXcd psi = coherent_state(sp, cfg.init());
    for (long long n = 0; n < steps; ++n) psi = op.step(psi);
    const HusimiGrid grid = husimi(sp, psi, cfg.n_theta(), cfg.n_phi(), cfg.workers());
    manifest.resolved["quadrature"] = grid.quadrature();
    if (format == "json") {
      nlohmann::json values = nlohmann::json::array();
      for (long long a = 0; a < grid.n_theta; ++a)
        for (long long b = 0; b < grid.n_phi; ++b) values.push_back(grid.values(a, b));
      nlohmann::json out = {{"kind", "husimi"},   {"n_theta", grid.n_theta},
                            {"n_phi", grid.n_phi}, {"theta_nodes", grid.theta_nodes},
                            {"phi_nodes", grid.phi_nodes}, {"values", values}};
      emit("husimi.json", out.dump(2) + "\n");
    } else {
      emit("husimi.csv", husimi_csv(grid));
    }
  } else if (kind == "entropy") {
    const long long j = cfg.j();
    const EngineParams params{j, cfg.alpha(), cfg.beta_spec()};
    manifest.resolved["beta"] = detail::beta_json(params.beta, j);
    const EntropyTrace trace = entropy_trace(cfg.engine(), params, cfg.init(), cfg.tau());
    if (format == "json") {
      nlohmann::json out = {{"kind", "entropy"},
                            {"engine", trace.source},
                            {"tau", cfg.tau()},
                            {"values", trace.values}};
      emit("entropy.json", out.dump(2) + "\n");
    } else {
      emit("entropy.csv", entropy_csv(trace));
    }
  } else if (kind == "field") {
    const long long j = cfg.j();
    const EngineParams params{j, cfg.alpha(), cfg.beta_spec()};
    manifest.resolved["beta"] = detail::beta_json(params.beta, j);
    manifest.resolved["workers"] = cfg.workers();
    const EntropyField field = entropy_field(cfg.engine(), params, cfg.grid_n(), cfg.tau(),
                                             cfg.stride(), cfg.workers());
    nlohmann::json sidecar = {{"kind", "field"},
                              {"engine", engine_name(field.engine)},
                              {"j", j},
                              {"alpha", params.alpha},
                              {"beta", detail::beta_json(params.beta, j)},
                              {"tau", field.tau},
                              {"stride", field.stride},
                              {"grid_n", field.grid_n},
                              {"theta_nodes", field.theta_nodes},
                              {"phi_nodes", field.phi_nodes}};
    if (format == "json") {
      nlohmann::json values = nlohmann::json::array();
      for (long long a = 0; a < field.grid_n; ++a)
        for (long long b = 0; b < field.grid_n; ++b) values.push_back(field.values(a, b));
      sidecar["values"] = values;
      emit("field.json", sidecar.dump(2) + "\n");
    } else {
      emit("field.csv", field_csv(field));
      emit("field.json", sidecar.dump(2) + "\n");
    }
  } else if (kind == "portrait") {
    if (cfg.has("engine") && cfg.engine() != Engine::Classical)
      throw ConfigError("engine: portraits run on the classical engine");
    const double alpha = cfg.alpha();
    const BetaSpec beta = cfg.beta_spec();
    const long long j = cfg.has("j") ? cfg.j() : 1;
    const double beta_value = beta.kind == BetaSpec::Kind::Absolute ? beta.value : beta.resolve(j);
    const long long steps = cfg.steps_or(400);
    manifest.resolved["beta"] = beta_value;
    const auto seeds = portrait_seed_grid(cfg.seeds());
    const auto trajectories = phase_portrait(alpha, beta_value, seeds, steps);
    if (format == "json") {
      nlohmann::json trs = nlohmann::json::array();
      for (const auto& tr : trajectories) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : tr.points) pts.push_back({p.theta, p.phi});
        trs.push_back(pts);
      }
      nlohmann::json out = {{"kind", "portrait"},
                            {"alpha", alpha},
                            {"beta", beta_value},
                            {"steps", steps},
                            {"trajectories", trs}};
      emit("portrait.json", out.dump(2) + "\n");
    } else {
      emit("portrait.csv", portrait_csv(trajectories));
    }
  } else if (kind == "verify") {
    const std::string target = cfg.target();
    nlohmann::json out = {{"kind", "verify"}, {"target", target}};
    bool pass = true;
    std::string detail_line;
    if (target == "gauss") {
      const auto g = gaussian_sums(cfg.r(), cfg.s());
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t l = 0; l < g.size(); ++l) {
        rows.push_back({{"l", l}, {"re", g[l].real()}, {"im", g[l].imag()}});
        log << "G_" << l << " = " << fmt(g[l].real()) << (g[l].imag() < 0 ? " - " : " + ")
            << fmt(std::abs(g[l].imag())) << "i\n";
      }
      out["gauss"] = rows;
      detail_line = "gauss table r=" + std::to_string(cfg.r()) + " s=" + std::to_string(cfg.s());
    } else if (target == "branch") {
      const BranchTable table = build_branch_table(cfg.r(), cfg.s());
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& br : table.branches) {
        rows.push_back(
            {{"shift", br.shift}, {"re", br.amp.real()}, {"im", br.amp.imag()}});
        log << "shift " << fmt(br.shift) << "  amp " << fmt(br.amp.real())
            << (br.amp.imag() < 0 ? " - " : " + ") << fmt(std::abs(br.amp.imag())) << "i\n";
      }
      out["branches"] = rows;
      out["normalization"] = table.normalization();
      const double tol = cfg.tol_or(1e-12);
      pass = std::abs(table.normalization() - 1.0) <= tol;
      detail_line = "branch normalization " + fmt(table.normalization());
    } else if (target == "splitting") {
      SpinSpace sp(cfg.j());
      const SphericalPoint p =
          cfg.has("point") ? parse_point(cfg.raw("point"), "point") : cfg.init();
      const double residual = verify_splitting_identity(sp, p, cfg.r(), cfg.s());
      const double tol = cfg.tol_or(1e-8);
      out["residual"] = residual;
      out["tol"] = tol;
      pass = residual <= tol;
      detail_line = "splitting residual " + fmt(residual);
      log << "splitting residual " << fmt(residual) << " (tol " << fmt(tol) << ")\n";
    } else if (target == "resonance") {
      SpinSpace sp(cfg.j());
      const ResonanceReport rep = check_resonance(sp, cfg.alpha(), cfg.r(), cfg.s());
      out["beta"] = rep.beta;
      out["checked"] = rep.checked;
      if (rep.deviation) {
        const double tol = cfg.tol_or(1e-8);
        out["deviation"] = *rep.deviation;
        out["tol"] = tol;
        pass = *rep.deviation <= tol;
        detail_line = rep.checked + " deviation " + fmt(*rep.deviation);
        log << rep.checked << " deviation " << fmt(*rep.deviation) << "\n";
      } else {
        out["eigenphases"] = rep.eigenphases;
        detail_line = "spectrum only, " + std::to_string(rep.eigenphases.size()) + " phases";
        log << "no identity asserted for s=" << cfg.s() << "; spectrum written\n";
      }
    } else {
      throw ConfigError("target: expected gauss, branch, splitting, or resonance, got '" +
                        target + "'");
    }
    out["pass"] = pass;
    emit("verify.json", out.dump(2) + "\n");
    if (!pass) throw CompareFailure("verify " + target + " failed: " + detail_line);
  } else {
    throw ConfigError("kind: unhandled experiment kind '" + kind + "'");
  }

  manifest.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  log << "wrote " << (dir / "manifest.json").string() << "\n";
  return manifest;
}

}  // namespace kicktop
