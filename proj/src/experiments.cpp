#include "raisac/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

#include "raisac/beamforming.hpp"
#include "raisac/error.hpp"
#include "raisac/hfh_trajectory.hpp"

namespace raisac {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int workers = std::clamp(threads, 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

double rate_from_snr(double snr) { return std::log2(1.0 + snr); }

std::string speed_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Collects optional per-threshold results into a curve, dropping infeasible points.
struct PointSlot {
  bool valid = false;
  double rate = 0.0;
  std::vector<double> extras;
};

SchemeResult assemble(std::string name, std::string label, std::vector<std::string> columns,
                      const std::vector<double>& thresholds, const std::vector<PointSlot>& slots) {
  SchemeResult r{std::move(name), std::move(label), {}, std::move(columns), {}};
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!slots[i].valid) continue;
    r.points.push_back({thresholds[i], slots[i].rate});
    r.extras.push_back(slots[i].extras);
  }
  return r;
}

// Concave envelope of a dense static curve together with the sweep points.
SchemeResult envelope_scheme(const ScenarioConfig& config, const std::vector<double>& thresholds) {
  const SystemParams& p = config.params;
  std::vector<RegionPoint> pts = region_curve(p, config.ts_curve_points).points;
  pts.push_back({0.0, optimal_rate(p, 0.0)});
  for (double g : thresholds) pts.push_back({g, optimal_rate(p, g)});
  const auto hull = upper_concave_hull(pts);
  SchemeResult r{"ts_bound", "TS-bound", {}, {}, {}};
  for (double g : thresholds) {
    r.points.push_back({g, std::max(envelope_value(hull, g), optimal_rate(p, g))});
    r.extras.emplace_back();
  }
  return r;
}

}  // namespace

ExperimentOutput run_static_comparison(const ScenarioConfig& config) {
  const SystemParams& p = config.params;
  ExperimentOutput out;
  const std::vector<double> thresholds = threshold_grid(config, &out.warnings);
  const std::size_t n = thresholds.size();
  const Position2D mid = 0.5 * (p.q_u + p.q_t);
  const double phi_mid = optimal_rotation(p, mid);

  auto fixed_rotation_rate = [&](Position2D q, double phi, double g) -> std::optional<double> {
    try {
      return rate_from_snr(max_comm_snr_given_rotation(p, q, phi, g).snr_c);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfeasibleSensing) throw;
      return std::nullopt;
    }
  };

  std::vector<PointSlot> midpoint(n), pos_only(n), ra_opt(n), joint(n);
  parallel_for(static_cast<int>(n), config.threads, [&](int idx) {
    const auto i = static_cast<std::size_t>(idx);
    const double g = thresholds[i];
    if (config.scheme_midpoint) {
      if (auto r = fixed_rotation_rate(mid, 0.0, g)) midpoint[i] = {true, *r, {}};
    }
    if (config.scheme_midpoint_ra_opt) {
      if (auto r = fixed_rotation_rate(mid, phi_mid, g)) ra_opt[i] = {true, *r, {}};
    }
    if (config.scheme_pos_only) {
      const int m = config.pos_only_points;
      for (int k = 0; k < m; ++k) {
        const Position2D q = lerp(p.q_u, p.q_t, static_cast<double>(k) / (m - 1));
        const auto r = fixed_rotation_rate(q, 0.0, g);
        if (r && (!pos_only[i].valid || *r > pos_only[i].rate)) pos_only[i] = {true, *r, {q.x, q.y}};
      }
    }
    const HoverSolution h = optimal_hover(p, g);
    joint[i] = {true, h.rate, {h.q_star.x, h.q_star.y}};
  });

  if (config.scheme_midpoint) {
    out.schemes.push_back(assemble("midpoint", "Midpoint (phi = 0)", {}, thresholds, midpoint));
  }
  if (config.scheme_pos_only) {
    out.schemes.push_back(assemble("pos_only", "Pos-only (phi = 0)", {"q_star_x", "q_star_y"},
                                   thresholds, pos_only));
  }
  if (config.scheme_midpoint_ra_opt) {
    out.schemes.push_back(
        assemble("midpoint_ra_opt", "Midpoint + RA-opt", {}, thresholds, ra_opt));
  }
  out.schemes.push_back(
      assemble("joint_opt", "Joint opt", {"q_star_x", "q_star_y"}, thresholds, joint));
  if (config.scheme_ts_bound) out.schemes.push_back(envelope_scheme(config, thresholds));
  return out;
}

ExperimentOutput run_mobility_sweep(const ScenarioConfig& config) {
  ExperimentOutput out;
  const std::vector<double> thresholds = threshold_grid(config, &out.warnings);
  const std::size_t n = thresholds.size();

  std::vector<double> speeds{0.0};
  for (double v : config.speeds_mps) {
    if (std::find(speeds.begin(), speeds.end(), v) == speeds.end()) speeds.push_back(v);
  }
  std::sort(speeds.begin(), speeds.end());

  for (double v : speeds) {
    SystemParams p = config.params;
    p.v_max = v;
    const HfhSolver solver(p, config.hfh_grid_n);
    std::vector<PointSlot> slots(n);
    parallel_for(static_cast<int>(n), config.threads, [&](int idx) {
      const auto i = static_cast<std::size_t>(idx);
      try {
        const HfhSolution s = solver.solve(thresholds[i]);
        slots[i] = {true, s.metrics.avg_rate, {s.s_a, s.s_b, s.mu, s.plan.t_fly}};
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Infeasible) throw;
      }
    });
    const std::string tag = speed_tag(v);
    out.schemes.push_back(assemble("hfh_v" + tag, "V = " + tag + " m/s",
                                   {"s_a", "s_b", "mu", "t_fly"}, thresholds, slots));
  }
  if (config.scheme_ts_bound) out.schemes.push_back(envelope_scheme(config, thresholds));
  return out;
}

// ---------------------------------------------------------------------------
// Verification suite

namespace {

constexpr double kBoxXMin = -50.0;
constexpr double kBoxXMax = 350.0;
constexpr double kBoxYMin = -50.0;
constexpr double kBoxYMax = 150.0;

struct Task {
  std::string family;
  std::function<std::vector<OracleReport>()> run;
};

// Per-instance seed, so results do not depend on scheduling.
std::uint64_t instance_seed(std::uint64_t base, std::uint64_t family, std::uint64_t index) {
  return base + 1000003ULL * family + index;
}

Position2D random_position(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(kBoxXMin, kBoxXMax);
  std::uniform_real_distribution<double> y(kBoxYMin, kBoxYMax);
  const double px = x(rng);
  return {px, y(rng)};
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Error measured against max(|cf|, |bf|, floor); used where values are
// bounded (correlations) or where the tolerance is absolute.
OracleReport compare_scaled(std::string id, double cf, double bf, double tol, double floor,
                            std::uint64_t seed) {
  const double scale = std::max({std::abs(cf), std::abs(bf), floor});
  const double err = std::abs(cf - bf) / scale;
  return {std::move(id), cf, bf, err, tol, err <= tol, seed};
}

// Brute force must not fall below the closed form by more than abs_tol.
OracleReport compare_lower_bound(std::string id, double cf, double bf, double abs_tol,
                                 std::uint64_t seed) {
  const double scale = std::max(std::abs(cf), 1e-12);
  const double err = std::max(cf - bf, 0.0) / scale;
  const double tol = abs_tol / scale;
  return {std::move(id), cf, bf, err, tol, err <= tol, seed};
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

bool selected(const ScenarioConfig& config, std::string_view family) {
  for (const auto& c : config.verify_claims) {
    if (c == "all" || c == family) return true;
  }
  return false;
}

void add_lemma1(const ScenarioConfig& config, std::vector<Task>& tasks) {
  const SystemParams p = config.params;
  for (int i = 0; i < config.verify_lemma1_instances; ++i) {
    const std::uint64_t seed = instance_seed(config.seed, 1, static_cast<std::uint64_t>(i));
    const int grid_n = config.verify_lemma1_grid_n;
    tasks.push_back({"lemma1", [p, seed, grid_n] {
                       std::mt19937_64 rng(seed);
                       std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                                    std::numbers::pi);
                       // Draw until the MRT beam misses a reachable threshold.
                       for (;;) {
                         const Position2D q = random_position(rng);
                         const double phi = angle(rng);
                         const auto f = sensing_channel_factors(p, q, phi);
                         ComplexVector w_full = f.a_t;
                         const double scale = std::sqrt(p.p_max / squared_norm(f.a_t));
                         for (auto& x : w_full) x *= scale;
                         const double g_full = sensing_snr(p, q, phi, w_full);
                         const double g_mrt = sensing_snr(p, q, phi, mrt_beamformer(p, q, phi));
                         if (g_mrt > g_full * 0.999) continue;
                         const double g = log_uniform(rng, std::max(g_mrt, 1e-6 * g_full) * 1.001,
                                                      g_full * 0.999);
                         const double cf = max_comm_snr_given_rotation(p, q, phi, g).snr_c;
                         const double bf = brute_force_beamforming(p, q, phi, g, grid_n);
                         return std::vector{
                             compare_values("lemma1.max_comm_snr", cf, bf, 1e-3, seed)};
                       }
                     }});
  }
}

void add_theorem1(const ScenarioConfig& config, std::vector<Task>& tasks) {
  const SystemParams p = config.params;
  for (int i = 0; i < config.verify_theorem1_instances; ++i) {
    const std::uint64_t seed = instance_seed(config.seed, 2, static_cast<std::uint64_t>(i));
    const int grid_n = config.verify_theorem1_grid_n;
    tasks.push_back({"theorem1", [p, seed, grid_n] {
                       std::mt19937_64 rng(seed);
                       const Position2D q = random_position(rng);
                       const double rho_star =
                           correlation_coefficient(p, q, optimal_rotation(p, q));
                       const double rho_grid =
                           correlation_coefficient(p, q, grid_search_rotation(p, q, grid_n));
                       return std::vector{
                           compare_scaled("theorem1.rho_is_one", 1.0, rho_star, 1e-9, 1.0, seed),
                           compare_upper_bound("theorem1.grid_not_better", rho_star, rho_grid,
                                               1e-9, seed)};
                     }});
  }
}

void add_theorem2(const ScenarioConfig& config, std::vector<Task>& tasks) {
  const SystemParams p = config.params;
  const int count = config.verify_theorem2_thresholds;
  const int grid_n = config.verify_theorem2_grid_n;
  const double scale = config.mutation_rate_scale;
  const double lo = plateau_limit(p) / 10.0;
  const double hi = feasibility_limit(p);
  const Box box{kBoxXMin, kBoxXMax, kBoxYMin, kBoxYMax};
  // Any grid cell holds a feasible node within two diagonals of the optimum,
  // and the rate changes by at most 1/(H ln 2) per metre.
  const double diag = std::hypot((box.x_max - box.x_min) / grid_n, (box.y_max - box.y_min) / grid_n);
  const double slack = 2.0 * diag / (p.h_alt * std::numbers::ln2);
  for (int i = 0; i < count; ++i) {
    const double g = count == 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    const auto seed = static_cast<std::uint64_t>(i);
    tasks.push_back({"theorem2", [=] {
                       const double cf = scale * optimal_rate(p, g);
                       const double bf = grid_search_hover(p, g, box, grid_n).rate;
                       return std::vector{
                           compare_upper_bound("theorem2.grid_not_better", cf, bf, 1e-9, seed),
                           compare_lower_bound("theorem2.grid_within_resolution", cf, bf, slack,
                                               seed)};
                     }});
  }
}

// Second difference with one Richardson step.
double second_difference(const SystemParams& p, double g, double h) {
  auto d2 = [&](double step) {
    return (optimal_rate(p, g + step) - 2.0 * optimal_rate(p, g) + optimal_rate(p, g - step)) /
           (step * step);
  };
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

void add_prop1(const ScenarioConfig& config, std::vector<Task>& tasks) {
  const SystemParams p = config.params;
  tasks.push_back({"prop1", [p] {
                     std::vector<OracleReport> out;
                     const NonconvexityTest test = is_region_nonconvex(p);
                     const long double a = comm_constant(p);
                     const long double h2 = static_cast<long double>(p.h_alt) * p.h_alt;
                     const long double naive =
                         4.0L / 3.0L * std::sqrt(h2 + a) * (std::sqrt(4.0L * h2 + a) - std::sqrt(h2 + a));
                     out.push_back(compare_values("prop1.threshold", test.threshold_m2,
                                                  static_cast<double>(naive), 1e-6));

                     const double lo = plateau_limit(p);
                     const double hi = feasibility_limit(p);
                     if (!(lo < hi)) return out;
                     out.push_back(compare_values("prop1.lower_end_negative", -1.0,
                                                  sign_of(rate_second_derivative(p, lo * (1.0 + 1e-9))), 0.0));
                     out.push_back(compare_values("prop1.upper_end_negative", -1.0,
                                                  sign_of(rate_second_derivative(p, hi * (1.0 - 1e-9))), 0.0));

                     constexpr int kScan = 10000;
                     bool positive = false;
                     for (int k = 0; k < kScan; ++k) {
                       const double g = lo + (hi - lo) * (k + 0.5) / kScan;
                       positive = positive || rate_second_derivative(p, g) > 0.0;
                     }
                     out.push_back(compare_values("prop1.nonconvexity_matches_scan",
                                                  test.nonconvex ? 1.0 : 0.0,
                                                  positive ? 1.0 : 0.0, 0.0));

                     // Finite differences away from the endpoints, where the
                     // stencil stays inside the interval.
                     constexpr int kFd = 200;
                     std::vector<double> gs, exact;
                     double peak = 0.0;
                     for (int k = 0; k < kFd; ++k) {
                       const double g = lo + (hi - lo) * (0.01 + 0.98 * k / (kFd - 1));
                       gs.push_back(g);
                       exact.push_back(rate_second_derivative(p, g));
                       peak = std::max(peak, std::abs(exact.back()));
                     }
                     OracleReport worst{"prop1.second_derivative_fd", 0, 0, -1.0, 1e-4, true, 0};
                     for (std::size_t k = 0; k < gs.size(); ++k) {
                       if (std::abs(exact[k]) < 1e-2 * peak) continue;
                       const double h = std::min(1e-3 * gs[k], 0.25 * std::min(gs[k] - lo, hi - gs[k]));
                       // Values are ~1e-20, so the absolute fallback must not apply.
                       auto r = compare_scaled("prop1.second_derivative_fd", exact[k],
                                               second_difference(p, gs[k], h), 1e-4,
                                               std::numeric_limits<double>::min(), 0);
                       if (r.rel_error > worst.rel_error) worst = r;
                     }
                     if (worst.rel_error >= 0.0) out.push_back(worst);
                     return out;
                   }});
}

void add_integrals(const ScenarioConfig& config, std::vector<Task>& tasks) {
  const SystemParams p = config.params;
  const std::uint64_t base = config.seed;
  constexpr int kSegments = 100;
  for (int i = 0; i < kSegments; ++i) {
    const std::uint64_t seed = instance_seed(base, 5, static_cast<std::uint64_t>(i));
    tasks.push_back({"integrals", [p, seed] {
                       std::mt19937_64 rng(seed);
                       const Position2D a = random_position(rng);
                       const Position2D b = random_position(rng);
                       std::uniform_real_distribution<double> speed(1.0, 30.0);
                       const double v = speed(rng);
                       const double t_fly = norm(b - a) / v;
                       const double big_b = sensing_constant(p);
                       const double cf = flight_sensing_integral(p, a, b, v);
                       const double bf = quadrature_reference(
                           [&](double t) {
                             const double d = distance_3d(lerp(a, b, t / t_fly), p.q_t, p.h_alt);
                             return big_b / (d * d);
                           },
                           0.0, t_fly, 1e-12);
                       return std::vector{
                           compare_values("integrals.flight_sensing", cf, bf, 1e-9, seed)};
                     }});
  }

  constexpr int kTriples = 1000;
  constexpr int kPerTask = 100;
  for (int chunk = 0; chunk < kTriples / kPerTask; ++chunk) {
    tasks.push_back({"integrals", [base, chunk] {
                       std::vector<OracleReport> out;
                       for (int j = 0; j < kPerTask; ++j) {
                         const std::uint64_t seed = instance_seed(
                             base, 6, static_cast<std::uint64_t>(chunk * kPerTask + j));
                         std::mt19937_64 rng(seed);
                         std::uniform_real_distribution<double> angle(-std::numbers::pi,
                                                                      std::numbers::pi);
                         std::uniform_int_distribution<int> elements(2, 32);
                         const double tu = angle(rng);
                         const double ts = angle(rng);
                         const double phi = angle(rng);
                         const int m = elements(rng);
                         const auto au = steering_vector(tu - phi, m);
                         const auto as = steering_vector(ts - phi, m);
                         const double direct = std::abs(inner_product(au, as)) / m;
                         out.push_back(compare_scaled("integrals.dirichlet",
                                                      correlation_dirichlet(tu, ts, phi, m), direct,
                                                      1e-10, 1.0, seed));
                       }
                       return out;
                     }});
  }

  constexpr int kMu = 100;
  for (int i = 0; i < kMu; ++i) {
    const std::uint64_t seed = instance_seed(base, 7, static_cast<std::uint64_t>(i));
    tasks.push_back({"integrals", [p, seed] {
                       std::mt19937_64 rng(seed);
                       std::uniform_real_distribution<double> speed(3.0, 30.0);
                       std::uniform_real_distribution<double> unit(0.0, 1.0);
                       for (;;) {
                         Position2D a = random_position(rng);
                         Position2D b = random_position(rng);
                         const double v = speed(rng);
                         const double share = unit(rng);
                         auto gamma = [&](Position2D q) {
                           const double d = distance_3d(q, p.q_t, p.h_alt);
                           return sensing_constant(p) / (d * d);
                         };
                         if (gamma(a) < gamma(b)) std::swap(a, b);
                         if (gamma(a) - gamma(b) < 1e-6 * gamma(a)) continue;
                         const double t_fly = norm(b - a) / v;
                         if (t_fly >= p.t_total) continue;
                         const double t_hov = p.t_total - t_fly;
                         const double flight = flight_sensing_integral(p, a, b, v);
                         const double g_lo = (t_hov * gamma(b) + flight) / p.t_total;
                         const double g_hi = (t_hov * gamma(a) + flight) / p.t_total;
                         const double g = g_lo + (0.01 + 0.98 * share) * (g_hi - g_lo);
                         const double mu = time_share_mu(p, a, b, g, v, p.t_total);
                         const HfhPlan plan = make_hfh_plan(a, b, mu, v, p.t_total);
                         const double achieved = average_metrics(p, plan).avg_sensing;
                         return std::vector{
                             compare_values("integrals.mu_substitution", g, achieved, 1e-9, seed)};
                       }
                     }});
  }
}

void add_theorem3(const ScenarioConfig& config, std::vector<Task>& tasks) {
  const int count = config.verify_theorem3_thresholds;
  const double lo = plateau_limit(config.params) / 2.0;
  const double hi = feasibility_limit(config.params);
  for (std::size_t si = 0; si < config.verify_theorem3_speeds_mps.size(); ++si) {
    SystemParams p = config.params;
    p.v_max = config.verify_theorem3_speeds_mps[si];
    auto solver = std::make_shared<const HfhSolver>(p, config.hfh_grid_n);
    const std::string id = "theorem3.hfh_dominance.v" + speed_tag(p.v_max);
    for (int i = 0; i < count; ++i) {
      const double g =
          count == 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
      const std::uint64_t seed =
          instance_seed(config.seed, 8, static_cast<std::uint64_t>(si * 1000 + i));
      TrajectorySearchOptions opt;
      opt.n_steps = config.verify_theorem3_steps;
      opt.n_restarts = config.verify_theorem3_restarts;
      opt.seed = seed;
      tasks.push_back({"theorem3", [p, g, opt, solver, id, seed] {
                         const HfhSolution s = solver->solve(g);
                         const double bf =
                             discretized_trajectory_search(p, g, p.v_max, p.t_total, opt, s.plan);
                         const double cf = s.metrics.avg_rate;
                         return std::vector{compare_upper_bound(id, cf, bf, 1e-3 / cf, seed)};
                       }});
    }
  }
}

bool worse(const OracleReport& a, const OracleReport& b) {
  if (a.passed != b.passed) return !a.passed;
  const double ra = a.tolerance > 0.0 ? a.rel_error / a.tolerance : a.rel_error;
  const double rb = b.tolerance > 0.0 ? b.rel_error / b.tolerance : b.rel_error;
  return ra > rb;
}

}  // namespace

std::vector<OracleReport> run_verification(const ScenarioConfig& config) {
  std::vector<Task> tasks;
  if (selected(config, "lemma1")) add_lemma1(config, tasks);
  if (selected(config, "theorem1")) add_theorem1(config, tasks);
  if (selected(config, "theorem2")) add_theorem2(config, tasks);
  if (selected(config, "prop1")) add_prop1(config, tasks);
  if (selected(config, "integrals")) add_integrals(config, tasks);
  if (selected(config, "theorem3")) add_theorem3(config, tasks);

  std::vector<std::vector<OracleReport>> results(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), config.threads, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      results[k] = tasks[k].run();
    } catch (const std::exception& e) {
      // A claim whose oracle cannot run counts as failed.
      results[k] = {{tasks[k].family + ".error", 0.0, 0.0,
                     std::numeric_limits<double>::infinity(), 0.0, false, 0}};
      std::fprintf(stderr, "%s: %s\n", tasks[k].family.c_str(), e.what());
    }
  });

  // Worst instance per claim id, in order of first appearance.
  std::vector<OracleReport> out;
  std::map<std::string, std::size_t> index;
  for (const auto& batch : results) {
    for (const auto& r : batch) {
      const auto [it, inserted] = index.emplace(r.claim_id, out.size());
      if (inserted) {
        out.push_back(r);
      } else if (worse(r, out[it->second])) {
        out[it->second] = r;
      }
    }
  }
  return out;
}

}  // namespace raisac
