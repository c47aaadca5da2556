// Command-line harness: every engine behind subcommands with declarative
// configs, deterministic outputs, and the exit-code taxonomy
// 0 ok / 1 validation / 2 engine / 3 comparison.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kicktop/compare.hpp"
#include "kicktop/config.hpp"
#include "kicktop/errors.hpp"
#include "kicktop/io.hpp"
#include "kicktop/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kicktop::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  std::string format;
  long long workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Experiment config file (INI key = value)");
  cmd->add_option("--set", opts.sets, "Override config entries as key=value")
      ->type_name("KEY=VALUE");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--format", opts.format, "Output format: csv or json");
  cmd->add_option("--workers", opts.workers, "Worker thread count (default: KICKTOP_WORKERS or 1)");
}

kicktop::ExperimentConfig assemble(const std::string& kind, const CommonOpts& opts) {
  kicktop::ExperimentConfig cfg;
  if (!opts.config_path.empty()) cfg = kicktop::ExperimentConfig::parse(slurp(opts.config_path));
  cfg.set("kind", kind);
  for (const auto& kv : opts.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw kicktop::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opts.out_dir.empty()) cfg.set("out", opts.out_dir);
  if (!opts.format.empty()) cfg.set("format", opts.format);
  if (opts.workers > 0) cfg.set("workers", std::to_string(opts.workers));
  return cfg;
}

int run_compare(const std::string& path_a, const std::string& path_b,
                const std::string& relation, double tol, const std::string& alpha_text,
                const std::string& out_dir) {
  const auto a = kicktop::read_trace_csv(path_a);
  const auto b = kicktop::read_trace_csv(path_b);
  const double alpha = kicktop::parse_angle(alpha_text, "alpha");
  const auto rep =
      kicktop::compare_traces(a, b, kicktop::parse_relation(relation), tol, alpha);
  std::cout << "max residual " << kicktop::fmt(rep.max_residual) << " at n="
            << rep.argmax_step << " component=" << "xyz"[rep.argmax_component] << " (tol "
            << kicktop::fmt(tol) << "): " << (rep.pass ? "PASS" : "FAIL") << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::string csv = "n,rx,ry,rz\n";
    for (std::size_t n = 0; n < rep.residuals.size(); ++n) {
      csv += kicktop::fmt(static_cast<long long>(n));
      for (const double v : rep.residuals[n]) csv += "," + kicktop::fmt(v);
      csv += "\n";
    }
    kicktop::write_text(std::filesystem::path(out_dir) / "residuals.csv", csv);
  }
  if (!rep.pass)
    throw kicktop::CompareFailure("relation '" + relation + "' violated, max residual " +
                                  kicktop::fmt(rep.max_residual));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kicked-top laboratory: quantum, classical, and pseudoclassical engines"};
  app.require_subcommand(1);

  static const std::vector<std::string> kinds = {"evolve",  "husimi",   "entropy",
                                                 "field",   "portrait", "verify"};
  static const std::vector<std::string> kind_help = {
      "Expectation-value time series for one initial coherent state",
      "Husimi distribution snapshot after a number of kicks",
      "Linear-entropy time series for one initial coherent state",
      "Time-averaged entropy over a grid of initial states",
      "Classical phase-space portrait from a seed grid",
      "Identity checks: gauss, branch, splitting, resonance"};

  std::vector<CommonOpts> opts(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i)
    add_common(app.add_subcommand(kinds[i], kind_help[i]), opts[i]);

  auto* cmp = app.add_subcommand("compare", "Check two traces against a synchronization law");
  std::string cmp_a, cmp_b, cmp_relation = "equal", cmp_alpha = "pi/2", cmp_out;
  double cmp_tol = 1e-9;
  cmp->add_option("trace_a", cmp_a, "Trace CSV under test")->required();
  cmp->add_option("trace_b", cmp_b, "Reference trace CSV")->required();
  cmp->add_option("--relation", cmp_relation, "equal, case1, or case2");
  cmp->add_option("--tol", cmp_tol, "Max allowed per-component residual");
  cmp->add_option("--alpha", cmp_alpha, "Precession angle the sync tables assume");
  cmp->add_option("--out", cmp_out, "Optional directory for the residual table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmp->parsed()) return run_compare(cmp_a, cmp_b, cmp_relation, cmp_tol, cmp_alpha, cmp_out);
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (app.get_subcommand(kinds[i])->parsed()) {
        kicktop::run(assemble(kinds[i], opts[i]), std::cout);
        return 0;
      }
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
  } catch (const kicktop::CompareFailure& e) {
    std::cerr << "comparison failure: " << e.what() << "\n";
    return 3;
  } catch (const kicktop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const kicktop::EngineError& e) {
    std::cerr << "engine failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "engine failure: " << e.what() << "\n";
    return 2;
  }
}
