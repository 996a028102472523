// Command-line driver for the static and mobility trade-off experiments.
//
//   raisac static-region  [--config F] [--out DIR] [--threads N]
//   raisac mobility-sweep [--config F] [--out DIR] [--threads N]
//   raisac verify         [--config F] [--out DIR] [--seed N] [--threads N]
//   raisac plan --gamma-db X [--speed V] [--config F]
//
// Exit status: 0 ok, 1 configuration or input error, 2 verification failure, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "raisac/config.hpp"
#include "raisac/error.hpp"
#include "raisac/experiments.hpp"
#include "raisac/hfh_trajectory.hpp"
#include "raisac/output.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

raisac::ScenarioConfig resolve(const GlobalOptions& g) {
  raisac::ScenarioConfig c;
  if (!g.config_path.empty()) c = raisac::load_config(g.config_path);
  if (g.out_dir) c.output_dir = *g.out_dir;
  if (g.seed) c.seed = *g.seed;
  if (g.threads) {
    if (*g.threads < 1) throw raisac::Error(raisac::ErrorKind::ConfigError, "--threads must be >= 1");
    c.threads = *g.threads;
  }
  return c;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void print_written(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

int run_static(const raisac::ScenarioConfig& c) {
  const auto result = raisac::run_static_comparison(c);
  print_warnings(result.warnings);
  print_written(raisac::emit_outputs(result.schemes, c.output_dir, "static_region",
                                     "Rate versus sensing threshold, static UAV"));
  return 0;
}

int run_mobility(const raisac::ScenarioConfig& c) {
  const auto result = raisac::run_mobility_sweep(c);
  print_warnings(result.warnings);
  print_written(raisac::emit_outputs(result.schemes, c.output_dir, "mobility_sweep",
                                     "Rate versus sensing threshold, hover-fly-hover"));
  return 0;
}

int run_verify(const raisac::ScenarioConfig& c) {
  const auto reports = raisac::run_verification(c);
  const std::filesystem::path dir = c.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw raisac::Error(raisac::ErrorKind::IoError, "cannot create " + dir.string());
  raisac::write_text_file(dir / "verification.csv", raisac::report_csv(reports));
  const std::string table = raisac::report_table(reports);
  raisac::write_text_file(dir / "verification.txt", table);
  std::cout << table;
  for (const auto& r : reports) {
    if (!r.passed) return kExitVerify;
  }
  return 0;
}

int run_plan(const raisac::ScenarioConfig& c, double gamma_db, std::optional<double> speed) {
  raisac::SystemParams p = c.params;
  if (speed) p.v_max = *speed;
  const double gamma = raisac::db_to_linear(gamma_db);
  const auto s = raisac::optimize_hfh(p, gamma, c.hfh_grid_n);
  std::printf("gamma_th_db = %.12g\n", gamma_db);
  std::printf("gamma_th_linear = %.12g\n", gamma);
  std::printf("v_mps = %.12g\n", p.v_max);
  std::printf("t_total_s = %.12g\n", p.t_total);
  std::printf("q_a_m = %.12g, %.12g\n", s.plan.q_a.x, s.plan.q_a.y);
  std::printf("q_b_m = %.12g, %.12g\n", s.plan.q_b.x, s.plan.q_b.y);
  std::printf("s_a = %.12g\n", s.s_a);
  std::printf("s_b = %.12g\n", s.s_b);
  std::printf("mu = %.12g\n", s.mu);
  std::printf("tau_a_s = %.12g\n", s.plan.tau_a);
  std::printf("t_fly_s = %.12g\n", s.plan.t_fly);
  std::printf("tau_b_s = %.12g\n", s.plan.tau_b);
  std::printf("avg_rate_bps_hz = %.12g\n", s.metrics.avg_rate);
  std::printf("avg_sensing_linear = %.12g\n", s.metrics.avg_sensing);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotatable-antenna UAV sensing/communication trade-off calculator"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Scenario file (key = value)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--seed", g.seed, "Seed for the verification instances");
  app.add_option("--threads", g.threads, "Worker threads");

  auto* static_cmd = app.add_subcommand("static-region", "Static deployment schemes");
  auto* mobility_cmd = app.add_subcommand("mobility-sweep", "HFH curves for several speeds");
  auto* verify_cmd = app.add_subcommand("verify", "Closed forms against brute-force oracles");
  auto* plan_cmd = app.add_subcommand("plan", "Best HFH plan for one threshold");
  double gamma_db = 0.0;
  std::optional<double> speed;
  plan_cmd->add_option("--gamma-db", gamma_db, "Sensing threshold in dB")->required();
  plan_cmd->add_option("--speed", speed, "Speed in m/s (default: v_max_mps)");
  for (auto* sub : {static_cmd, mobility_cmd, verify_cmd, plan_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const raisac::ScenarioConfig c = resolve(g);
    if (*static_cmd) return run_static(c);
    if (*mobility_cmd) return run_mobility(c);
    if (*verify_cmd) return run_verify(c);
    return run_plan(c, gamma_db, speed);
  } catch (const raisac::Error& e) {
    std::cerr << "error (" << raisac::to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == raisac::ErrorKind::IoError ? kExitIo : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
