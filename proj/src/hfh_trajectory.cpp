#include "raisac/hfh_trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "raisac/beamforming.hpp"
#include "raisac/error.hpp"
#include "raisac/quadrature.hpp"
#include "raisac/static_region.hpp"

namespace raisac {

namespace {

constexpr double kFeasibilitySlack = 1e-12;

}  // namespace

double flight_time(Position2D q_a, Position2D q_b, double v) {
  const double length = norm(q_b - q_a);
  if (length == 0.0) return 0.0;
  if (v <= 0.0) return std::numeric_limits<double>::infinity();
  return length / v;
}

HfhPlan make_hfh_plan(Position2D q_a, Position2D q_b, double mu, double v, double t_total) {
  const double t_fly = flight_time(q_a, q_b, v);
  if (t_fly > 0.0 && !(t_fly < t_total)) {
    throw Error(ErrorKind::ZeroHoverTime, "flight does not fit in the mission time");
  }
  const double t_hov = t_total - t_fly;
  mu = std::clamp(mu, 0.0, 1.0);
  return {q_a, q_b, mu * t_hov, (1.0 - mu) * t_hov, t_fly, v, t_total};
}

Position2D hfh_position(const HfhPlan& plan, double t) {
  if (!(t >= 0.0 && t <= plan.t_total)) {
    throw Error(ErrorKind::DomainError, "time outside the mission");
  }
  if (t < plan.tau_a) return plan.q_a;
  if (t < plan.tau_a + plan.t_fly) return lerp(plan.q_a, plan.q_b, (t - plan.tau_a) / plan.t_fly);
  return plan.q_b;
}

double flight_sensing_integral(const SystemParams& p, Position2D q_a, Position2D q_b, double v) {
  const Position2D d = q_b - q_a;
  const double length = norm(d);
  if (length == 0.0) return 0.0;
  // Along the path, |q - q_t|^2 + H^2 = (l + m)^2 + k^2 with l the arc length.
  const Position2D dir = (1.0 / length) * d;
  const Position2D rel = q_a - p.q_t;
  const double m = rel.x * dir.x + rel.y * dir.y;
  const double perp = rel.x * dir.y - rel.y * dir.x;
  const double k = std::sqrt(perp * perp + p.h_alt * p.h_alt);
  const double angle = std::atan2(length * k, k * k + m * (length + m));
  return sensing_constant(p) / (v * k) * angle;
}

double flight_sensing_integral(const SystemParams& p, Position2D q_a, Position2D q_b) {
  return flight_sensing_integral(p, q_a, q_b, p.v_max);
}

double flight_rate_integral(const SystemParams& p, Position2D q_a, Position2D q_b, double v) {
  const double dt = flight_time(q_a, q_b, v);
  if (dt == 0.0) return 0.0;
  auto rate = [&](double u) { return rate_at_optimum(p, lerp(q_a, q_b, u / dt)); };
  return adaptive_simpson(rate, 0.0, dt);
}

double flight_rate_integral(const SystemParams& p, Position2D q_a, Position2D q_b) {
  return flight_rate_integral(p, q_a, q_b, p.v_max);
}

AverageMetrics average_metrics(const SystemParams& p, const HfhPlan& plan) {
  double rate = plan.tau_a * rate_at_optimum(p, plan.q_a) +
                plan.tau_b * rate_at_optimum(p, plan.q_b);
  double sensing = plan.tau_a * sensing_snr_at_optimum(p, plan.q_a) +
                   plan.tau_b * sensing_snr_at_optimum(p, plan.q_b);
  if (plan.t_fly > 0.0) {
    rate += flight_rate_integral(p, plan.q_a, plan.q_b, plan.v);
    sensing += flight_sensing_integral(p, plan.q_a, plan.q_b, plan.v);
  }
  return {rate / plan.t_total, sensing / plan.t_total};
}

double time_share_mu(const SystemParams& p, Position2D q_a, Position2D q_b, double gamma_th,
                     double v, double t_total) {
  const double t_fly = flight_time(q_a, q_b, v);
  if (!(t_fly < t_total)) throw Error(ErrorKind::ZeroHoverTime, "no hover time left");
  const double t_hov = t_total - t_fly;
  const double g_a = sensing_snr_at_optimum(p, q_a);
  const double g_b = sensing_snr_at_optimum(p, q_b);
  if (std::abs(g_a - g_b) < 1e-12 * g_a) {
    throw Error(ErrorKind::DegenerateSensing, "hover points have equal sensing SNR");
  }
  const double flight = t_fly > 0.0 ? flight_sensing_integral(p, q_a, q_b, v) : 0.0;
  const double mu = (gamma_th * t_total - flight - t_hov * g_b) / (t_hov * (g_a - g_b));
  return std::clamp(mu, 0.0, 1.0);
}

TimeAllocation infinite_speed_allocation(const SystemParams& p, Position2D q_a, Position2D q_b,
                                         double gamma_th, double t_total) {
  const double g_a = sensing_snr_at_optimum(p, q_a);
  const double g_b = sensing_snr_at_optimum(p, q_b);
  if (!(g_a > g_b)) throw Error(ErrorKind::InfeasiblePair, "need Gamma(q_a) > Gamma(q_b)");
  const double slack = kFeasibilitySlack * g_a;
  if (gamma_th < g_b - slack || gamma_th > g_a + slack) {
    throw Error(ErrorKind::InfeasiblePair, "gamma_th outside [Gamma(q_b), Gamma(q_a)]");
  }
  const double tau_a = std::clamp(t_total * (gamma_th - g_b) / (g_a - g_b), 0.0, t_total);
  return {tau_a, t_total - tau_a};
}

HfhSolver::HfhSolver(const SystemParams& p, int grid_n) : params_(p), grid_n_(grid_n) {
  validate(p);
  if (grid_n < 2) throw Error(ErrorKind::DomainError, "grid_n must be >= 2");
  length_ = user_target_distance(p);
  cum_rate_.assign(static_cast<std::size_t>(grid_n), 0.0);
  cum_sensing_.assign(static_cast<std::size_t>(grid_n), 0.0);
  if (length_ == 0.0) return;
  // Unit speed turns the time integrals into arc-length integrals.
  for (int i = 1; i < grid_n; ++i) {
    const Position2D from = at(static_cast<double>(i - 1) / (grid_n - 1));
    const Position2D to = at(static_cast<double>(i) / (grid_n - 1));
    const auto k = static_cast<std::size_t>(i);
    cum_rate_[k] = cum_rate_[k - 1] + flight_rate_integral(p, from, to, 1.0);
    cum_sensing_[k] = cum_sensing_[k - 1] + flight_sensing_integral(p, from, to, 1.0);
  }
}

Position2D HfhSolver::at(double s) const { return lerp(params_.q_u, params_.q_t, s); }

HfhSolver::Candidate HfhSolver::evaluate(const Target& t, double s_lo, double s_hi,
                                         double rate_integral, double sensing_integral) const {
  const SystemParams& p = params_;
  Candidate c{s_lo, s_hi, 0.0, 0.0, false};
  // Sensing grows monotonically toward the target, so a single hover point is
  // feasible exactly from the static optimum onwards. Comparing coordinates
  // instead of SNRs leaves no rounding slack for the search to exploit.
  if (s_lo == s_hi) {
    c.feasible = s_lo >= t.s_min;
    c.avg_rate = rate_at_optimum(p, at(s_lo));
    return c;
  }
  const double t_fly = flight_time(at(s_lo), at(s_hi), p.v_max);
  if (!(t_fly < p.t_total)) return c;
  const double t_hov = p.t_total - t_fly;
  const Position2D q_a = at(s_hi);
  const Position2D q_b = at(s_lo);
  const double g_a = sensing_snr_at_optimum(p, q_a);
  const double g_b = sensing_snr_at_optimum(p, q_b);
  if (std::abs(g_a - g_b) < 1e-12 * g_a) return c;  // single hover points are separate candidates
  // Any share in [0, 1] meets the constraint by construction; above 1 the pair cannot.
  const double mu_raw =
      (t.gamma_th * p.t_total - sensing_integral - t_hov * g_b) / (t_hov * (g_a - g_b));
  if (mu_raw > 1.0) return c;
  const double mu = std::max(mu_raw, 0.0);
  c.feasible = true;
  c.avg_rate = (t_hov * (mu * rate_at_optimum(p, q_a) + (1.0 - mu) * rate_at_optimum(p, q_b)) +
                rate_integral) /
               p.t_total;
  c.t_fly = t_fly;
  return c;
}

HfhSolver::Candidate HfhSolver::evaluate_direct(const Target& t, double s_lo, double s_hi) const {
  if (s_lo == s_hi || params_.v_max <= 0.0) return evaluate(t, s_lo, s_hi, 0.0, 0.0);
  const Position2D from = at(s_lo);
  const Position2D to = at(s_hi);
  return evaluate(t, s_lo, s_hi, flight_rate_integral(params_, from, to),
                  flight_sensing_integral(params_, from, to));
}

namespace {

// Strictly better, or tied within rounding and preferred by the tie-break order.
bool better(double rate, double t_fly, double s_lo, double best_rate, double best_t_fly,
            double best_s_lo) {
  const double tie = 1e-12 * std::max(std::abs(rate), std::abs(best_rate));
  if (rate > best_rate + tie) return true;
  if (rate < best_rate - tie) return false;
  if (t_fly != best_t_fly) return t_fly < best_t_fly;
  return s_lo < best_s_lo;
}

}  // namespace

HfhSolution HfhSolver::solve(double gamma_th) const {
  const SystemParams& p = params_;
  if (!(gamma_th >= 0.0)) throw Error(ErrorKind::DomainError, "gamma_th must be >= 0");
  if (gamma_th > feasibility_limit(p) * (1.0 + kFeasibilitySlack)) {
    throw Error(ErrorKind::Infeasible, "gamma_th exceeds the hover-over-target sensing SNR");
  }

  Candidate best;
  auto consider = [&](const Candidate& c) {
    if (!c.feasible) return;
    if (!best.feasible ||
        better(c.avg_rate, c.t_fly, c.s_lo, best.avg_rate, best.t_fly, best.s_lo)) {
      best = c;
    }
  };

  // The static optimum is always a candidate, so V = 0 reproduces it exactly.
  double s_static = 0.0;
  if (length_ > 0.0) {
    const HoverSolution hover = optimal_hover(p, gamma_th);
    s_static = std::clamp(norm(hover.q_star - p.q_u) / length_, 0.0, 1.0);
  }
  const Target target{gamma_th, s_static};
  consider(evaluate(target, s_static, s_static, 0.0, 0.0));
  if (length_ == 0.0) {
    if (!best.feasible) throw Error(ErrorKind::Infeasible, "no feasible hover point");
    HfhPlan plan = make_hfh_plan(p.q_u, p.q_u, 1.0, p.v_max, p.t_total);
    return {plan, average_metrics(p, plan), 0.0, 0.0, 1.0};
  }

  const double step = 1.0 / (grid_n_ - 1);
  const bool can_fly = p.v_max > 0.0;
  for (int i = 0; i < grid_n_; ++i) {
    const auto ki = static_cast<std::size_t>(i);
    for (int j = i; j < grid_n_; ++j) {
      if (j > i && !can_fly) break;
      const auto kj = static_cast<std::size_t>(j);
      const double rate_int = can_fly ? (cum_rate_[kj] - cum_rate_[ki]) / p.v_max : 0.0;
      const double sens_int = can_fly ? (cum_sensing_[kj] - cum_sensing_[ki]) / p.v_max : 0.0;
      consider(evaluate(target, i * step, j * step, rate_int, sens_int));
    }
  }
  if (!best.feasible) throw Error(ErrorKind::Infeasible, "no feasible hover pair on the grid");

  // Local pass on a 10x finer grid around the coarse optimum, with exact integrals.
  {
    const Candidate coarse = best;
    constexpr int kFine = 10;
    const double fine = step / kFine;
    for (int a = -kFine; a <= kFine; ++a) {
      const double s_lo = std::clamp(coarse.s_lo + a * fine, 0.0, 1.0);
      for (int b = -kFine; b <= kFine; ++b) {
        const double s_hi = std::clamp(coarse.s_hi + b * fine, 0.0, 1.0);
        if (s_hi < s_lo) continue;
        consider(evaluate_direct(target, s_lo, s_hi));
      }
    }
    // Compass search to polish the continuous optimum.
    constexpr std::array<std::array<int, 2>, 8> kDirs{
        {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};
    double h = fine;
    for (int iter = 0; h > 1e-12 && iter < 20000; ++iter) {
      bool improved = false;
      for (const auto& d : kDirs) {
        const double s_lo = std::clamp(best.s_lo + d[0] * h, 0.0, 1.0);
        const double s_hi = std::clamp(best.s_hi + d[1] * h, 0.0, 1.0);
        if (s_hi < s_lo || (s_lo == best.s_lo && s_hi == best.s_hi)) continue;
        const Candidate c = evaluate_direct(target, s_lo, s_hi);
        // Exact lexicographic order here: the tolerant tie-break is not
        // transitive and lets the search cycle through near-equal points.
        if (c.feasible && std::tie(c.avg_rate, best.t_fly, best.s_lo) >
                              std::tie(best.avg_rate, c.t_fly, c.s_lo)) {
          best = c;
          improved = true;
        }
      }
      if (!improved) h *= 0.5;
    }
  }

  HfhSolution out;
  out.s_a = best.s_hi;
  out.s_b = best.s_lo;
  const Position2D q_a = at(best.s_hi);
  const Position2D q_b = at(best.s_lo);
  if (best.s_lo == best.s_hi) {
    out.mu = 1.0;
  } else {
    out.mu = time_share_mu(p, q_a, q_b, gamma_th, p.v_max, p.t_total);
  }
  out.plan = make_hfh_plan(q_a, q_b, out.mu, p.v_max, p.t_total);
  out.metrics = average_metrics(p, out.plan);
  return out;
}

HfhSolution optimize_hfh(const SystemParams& p, double gamma_th, int grid_n) {
  return HfhSolver(p, grid_n).solve(gamma_th);
}

}  // namespace raisac
