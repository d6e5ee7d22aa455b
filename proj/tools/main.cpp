#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "kamreduce/diophantine.hpp"
#include "kamreduce/error.hpp"
#include "kamreduce/kam_driver.hpp"
#include "kamreduce/schedule.hpp"
#include "kamreduce/serialization.hpp"
#include "kamreduce/theta_grid.hpp"
#include "kamreduce/verifier.hpp"

namespace fs = std::filesystem;
using kam::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailure = 2;

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::optional<double> tolerance;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

kam::Config load_config(const Common& c) {
  kam::Config cfg = kam::config_from_json(kam::read_json_file(c.config));
  if (c.seed) cfg.rng_seed = *c.seed;
  if (c.tolerance) cfg.verify.tolerance = *c.tolerance;
  return cfg;
}

fs::path out_dir(const Common& c) {
  fs::path p(c.out);
  fs::create_directories(p);
  return p;
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw kam::Error("cannot write '" + path.string() + "'");
  out << body;
}

int cmd_reduce(const Common& c) {
  const kam::Config cfg = load_config(c);
  const fs::path dir = out_dir(c);
  spdlog::info("reduce: n={} d={} eps={}", cfg.problem.n, cfg.problem.d, cfg.problem.epsilon);
  const kam::RunReport rep = kam::run(cfg);
  for (const auto& h : rep.history) {
    spdlog::debug("step {}: eps_m[q'_m]={:.3e} K_eff={} margin={:.3e}", h.m, h.eps_qprime,
                  h.K_eff, h.min_margin);
  }
  for (const auto& w : rep.warnings) spdlog::warn("{}", w);

  Json j = kam::to_json(rep);
  j["rng_seed"] = cfg.rng_seed;
  j["timestamp"] = utc_timestamp();
  kam::write_json_file((dir / "report.json").string(), j);
  std::ostringstream csv;
  kam::write_steps_csv(csv, rep.history);
  write_text(dir / "steps.csv", csv.str());

  if (!rep.converged) {
    spdlog::error("reduce: {} {}", rep.status, rep.error);
    return kExitFailure;
  }
  spdlog::info("reduce: converged in {} steps, bounds {}", rep.steps,
               rep.bounds_ok() ? "ok" : "violated");
  return kExitOk;
}

int cmd_verify(const Common& c, const std::string& report_path) {
  const kam::Config cfg = load_config(c);
  const fs::path dir = out_dir(c);
  kam::RunReport rep = kam::run_report_from_json(kam::read_json_file(report_path));
  // Never trust the stored verdicts.
  rep.bounds = kam::bound_checks(rep);

  const int d = cfg.problem.d;
  const kam::CVec z0 = Eigen::Map<const kam::CVec>(cfg.verify.z0.data(), d);
  if (!rep.converged) {
    spdlog::error("verify: report status '{}' is not converged", rep.status);
    return kExitFailure;
  }
  if (rep.N_inf.rows() != d || static_cast<int>(rep.v_inf.size()) != d) {
    throw kam::ConfigError("report dimensions do not match config");
  }
  const kam::ConjugacyReport cr =
      kam::conjugacy_defect(rep, cfg.problem, z0, cfg.verify.T, cfg.verify.dt);
  Json j = kam::to_json(cr, cfg.verify.tolerance);
  j["timestamp"] = utc_timestamp();
  kam::write_json_file((dir / "conjugacy.json").string(), j);
  std::ostringstream csv;
  kam::write_defect_csv(csv, cr);
  write_text(dir / "defect.csv", csv.str());

  for (const auto& b : cr.bound_checks) {
    if (!b.pass) spdlog::error("verify: bound {} = {:.3e} exceeds {:.3e}", b.name, b.value, b.bound);
  }
  spdlog::info("verify: sup defect {:.3e} (tolerance {:.1e}), integrator error {:.3e}",
               cr.sup_defect, cfg.verify.tolerance, cr.richardson_error);
  return cr.bounds_ok() && cr.sup_defect <= cfg.verify.tolerance ? kExitOk : kExitFailure;
}

struct ScanRow {
  std::vector<double> omega;
  kam::DiophantineReport rep;
};

int cmd_scan(const Common& c, std::optional<int> grid_override) {
  kam::Config cfg = load_config(c);
  if (grid_override) cfg.scan.points_per_axis = *grid_override;
  const kam::ScanParams& sp = cfg.scan;
  const int n = cfg.problem.n;
  const double total = std::pow(static_cast<double>(sp.points_per_axis), n);
  if (sp.points_per_axis < 1 || total > 1e6) {
    throw kam::ConfigError("scan grid must have between 1 and 1e6 points");
  }
  const fs::path dir = out_dir(c);
  std::vector<double> eigs = cfg.problem.v;
  std::sort(eigs.begin(), eigs.end());
  const double tau = cfg.schedule.tau.value_or(kam::default_tau(n, cfg.schedule.beta));
  kam::AdmissibilityOptions opt;
  opt.v0 = eigs.front();

  const std::size_t points = static_cast<std::size_t>(total);
  std::vector<ScanRow> rows(points);
  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      std::vector<double> om(n);
      std::size_t rem = p;
      for (int j = n - 1; j >= 0; --j) {
        const std::size_t i = rem % sp.points_per_axis;
        rem /= sp.points_per_axis;
        om[j] = sp.omega_min[j] +
                (sp.omega_max[j] - sp.omega_min[j]) * (i + 0.5) / sp.points_per_axis;
      }
      rows[p] = {om, kam::check_admissible(om, eigs, sp.K, sp.gamma, tau, opt)};
    }
  };
  const int threads = std::min<int>(thread_count(c.threads), static_cast<int>(points));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back(worker, points * t / threads, points * (t + 1) / threads);
  }
  for (auto& th : pool) th.join();

  std::ostringstream csv;
  csv << std::setprecision(17);
  for (int j = 0; j < n; ++j) csv << "omega" << j + 1 << ',';
  csv << "admissible,min_margin,worst_k,worst_family\n";
  std::size_t bad = 0;
  for (const auto& r : rows) {
    for (double x : r.omega) csv << x << ',';
    std::string k;
    for (int v : r.rep.worst_k.to_vector()) k += (k.empty() ? "" : ";") + std::to_string(v);
    csv << (r.rep.admissible ? "true" : "false") << ',';
    if (std::isfinite(r.rep.min_margin)) csv << r.rep.min_margin;
    else csv << "inf";
    csv << ',' << k << ',' << kam::to_string(r.rep.worst_family) << '\n';
    bad += r.rep.admissible ? 0 : 1;
  }
  write_text(dir / "scan.csv", csv.str());

  Json summary = {{"schema", kam::kSchemaVersion},
                  {"kind", "scan_summary"},
                  {"points", points},
                  {"K", sp.K},
                  {"gamma", sp.gamma},
                  {"tau", tau},
                  {"inadmissible_fraction", static_cast<double>(bad) / points},
                  {"bound_4_sqrt_gamma", 4.0 * std::sqrt(sp.gamma)},
                  {"monte_carlo", nullptr},
                  {"exact_1d", nullptr},
                  {"rng_seed", cfg.rng_seed}};
  if (sp.mc_samples > 0) {
    const auto mc = kam::measure_excised(n, eigs, sp.K, sp.gamma, tau, sp.mc_samples,
                                         cfg.rng_seed, opt, thread_count(c.threads));
    summary["monte_carlo"] = {{"fraction", mc.fraction}, {"ci95", mc.ci95},
                              {"samples", mc.samples}};
  }
  if (n == 1) summary["exact_1d"] = kam::exact_excised_fraction_1d(eigs, sp.K, sp.gamma, tau, opt);
  summary["timestamp"] = utc_timestamp();
  kam::write_json_file((dir / "scan_summary.json").string(), summary);
  spdlog::info("scan: {} points, {} inadmissible", points, bad);
  return kExitOk;
}

int cmd_dump_map(const Common& c, const std::string& report_path, int grid) {
  if (grid < 1 || grid > kam::kMaxGridPerAxis) throw kam::ConfigError("--grid must be in [1, 4096]");
  const fs::path dir = out_dir(c);
  const kam::RunReport rep = kam::run_report_from_json(kam::read_json_file(report_path));
  std::ostringstream csv;
  kam::write_map_csv(csv, rep.phi, grid);
  write_text(dir / "map.csv", csv.str());
  return kExitOk;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("kamreduce");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* lvl = std::getenv("KAMREDUCE_LOG")) {
    spdlog::set_level(spdlog::level::from_str(lvl));
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"KAM reducibility engine for quasi-periodically forced quadratic Hamiltonians"};
  app.require_subcommand(1);

  Common common;
  std::string report_path;
  std::optional<int> scan_grid;
  int map_grid = 64;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", common.config, "Problem JSON");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "Output directory");
    sub->add_option("--seed", common.seed, "RNG seed override");
    sub->add_option("--threads", common.threads, "Worker threads (0 = hardware)");
    sub->add_option("--tolerance", common.tolerance, "Conjugacy defect tolerance override");
  };
  auto* reduce = app.add_subcommand("reduce", "Run the KAM iteration");
  add_common(reduce, true);
  auto* verify = app.add_subcommand("verify", "Check a run report against direct integration");
  add_common(verify, true);
  verify->add_option("--report", report_path, "RunReport JSON")->required()->check(CLI::ExistingFile);
  auto* scan = app.add_subcommand("scan", "Diophantine admissibility over an omega grid");
  add_common(scan, true);
  scan->add_option("--grid", scan_grid, "Points per axis (overrides config)");
  auto* dump = app.add_subcommand("dump-map", "Sample the conjugacy map on a theta grid");
  add_common(dump, false);
  dump->add_option("--report", report_path, "RunReport JSON")->required()->check(CLI::ExistingFile);
  dump->add_option("--grid", map_grid, "Points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*reduce) return cmd_reduce(common);
    if (*verify) return cmd_verify(common, report_path);
    if (*scan) return cmd_scan(common, scan_grid);
    if (*dump) return cmd_dump_map(common, report_path, map_grid);
  } catch (const kam::ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitConfig;
}
