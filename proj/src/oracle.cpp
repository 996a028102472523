#include "raisac/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "raisac/error.hpp"
#include "raisac/quadrature.hpp"

namespace raisac {

OracleReport compare_values(std::string claim_id, double closed_form, double brute_force,
                            double tolerance, std::uint64_t seed) {
  OracleReport r{std::move(claim_id), closed_form, brute_force, 0.0, tolerance, false, seed};
  const double scale = std::max(std::abs(closed_form), std::abs(brute_force));
  const double diff = std::abs(closed_form - brute_force);
  if (scale < 1e-12) {
    r.rel_error = diff;
    r.passed = diff <= 1e-12;
  } else {
    r.rel_error = diff / scale;
    r.passed = r.rel_error <= tolerance;
  }
  return r;
}

OracleReport compare_upper_bound(std::string claim_id, double closed_form, double brute_force,
                                 double tolerance, std::uint64_t seed) {
  OracleReport r{std::move(claim_id), closed_form, brute_force, 0.0, tolerance, false, seed};
  const double excess = std::max(brute_force - closed_form, 0.0);
  const double scale = std::abs(closed_form);
  r.rel_error = scale < 1e-12 ? excess : excess / scale;
  r.passed = scale < 1e-12 ? excess <= 1e-12 : r.rel_error <= tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Beamforming

namespace {

struct SpanProblem {
  Complex comm_1, comm_2;  // u_i^H h_c
  Complex sens_1, sens_2;  // u_i^H a_t
  double comm_scale = 0.0;  // 1 / sigma_c2
  double sens_scale = 0.0;  // gain^2 * M_r factor / sigma_r2
  double root_p = 0.0;
  double gamma_th = 0.0;

  // Returns -inf when infeasible.
  double value(double r, double psi, double chi) const {
    const Complex c1{r * std::cos(psi), 0.0};
    const Complex c2 = std::polar(r * std::sin(psi), chi);
    const double sens = sens_scale * std::norm(std::conj(sens_1) * c1 + std::conj(sens_2) * c2);
    if (sens < gamma_th) return -std::numeric_limits<double>::infinity();
    return comm_scale * std::norm(std::conj(comm_1) * c1 + std::conj(comm_2) * c2);
  }
};

// Unit vector orthogonal to u (used when h_c is parallel to a_t).
ComplexVector any_orthogonal(const ComplexVector& u) {
  for (std::size_t k = 0; k < u.size(); ++k) {
    ComplexVector e(u.size());
    e[k] = 1.0;
    const Complex proj = inner_product(u, e);
    for (std::size_t i = 0; i < u.size(); ++i) e[i] -= proj * u[i];
    const double n = norm(e);
    if (n > 1e-6) {
      for (auto& z : e) z /= n;
      return e;
    }
  }
  return ComplexVector(u.size());
}

}  // namespace

double brute_force_beamforming(const SystemParams& p, Position2D q, double phi, double gamma_th,
                               int grid_n) {
  if (grid_n < 2) throw Error(ErrorKind::DomainError, "grid_n must be >= 2");
  const ComplexVector h_c = comm_channel(p, q, phi);
  const SensingChannelFactors f = sensing_channel_factors(p, q, phi);

  ComplexVector u1 = f.a_t;
  const double a_norm = norm(u1);
  for (auto& z : u1) z /= a_norm;
  ComplexVector u2 = h_c;
  const Complex proj = inner_product(u1, h_c);
  for (std::size_t i = 0; i < u2.size(); ++i) u2[i] -= proj * u1[i];
  const double perp = norm(u2);
  if (perp > 1e-12 * norm(h_c)) {
    for (auto& z : u2) z /= perp;
  } else {
    u2 = any_orthogonal(u1);
  }

  SpanProblem sp;
  sp.comm_1 = inner_product(u1, h_c);
  sp.comm_2 = inner_product(u2, h_c);
  sp.sens_1 = inner_product(u1, f.a_t);
  sp.sens_2 = inner_product(u2, f.a_t);
  sp.comm_scale = 1.0 / p.sigma_c2;
  sp.sens_scale = f.gain * f.gain * mr_factor(p) / p.sigma_r2;
  sp.root_p = std::sqrt(p.p_max);
  sp.gamma_th = gamma_th;

  constexpr double half_pi = 0.5 * std::numbers::pi;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double best = -std::numeric_limits<double>::infinity();
  double best_r = 0.0, best_psi = 0.0, best_chi = 0.0;
  for (int i = 1; i <= grid_n; ++i) {
    const double r = sp.root_p * i / grid_n;
    for (int j = 0; j < grid_n; ++j) {
      const double psi = half_pi * j / (grid_n - 1);
      for (int k = 0; k < grid_n; ++k) {
        const double chi = two_pi * k / grid_n;
        const double v = sp.value(r, psi, chi);
        if (v > best) {
          best = v;
          best_r = r;
          best_psi = psi;
          best_chi = chi;
        }
      }
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::Infeasible, "no beamformer on the grid meets the sensing threshold");
  }

  // Zoom: re-grid a +-2 cell window around the incumbent and shrink it.
  double dr = sp.root_p / grid_n;
  double dpsi = half_pi / (grid_n - 1);
  double dchi = two_pi / grid_n;
  constexpr int kZoomPoints = 10;
  for (int round = 0; round < 30; ++round) {
    const double r0 = best_r, psi0 = best_psi, chi0 = best_chi;
    for (int i = -kZoomPoints; i <= kZoomPoints; ++i) {
      const double r = std::clamp(r0 + 2.0 * dr * i / kZoomPoints, 0.0, sp.root_p);
      for (int j = -kZoomPoints; j <= kZoomPoints; ++j) {
        const double psi = std::clamp(psi0 + 2.0 * dpsi * j / kZoomPoints, 0.0, half_pi);
        for (int k = -kZoomPoints; k <= kZoomPoints; ++k) {
          const double chi = chi0 + 2.0 * dchi * k / kZoomPoints;
          const double v = sp.value(r, psi, chi);
          if (v > best) {
            best = v;
            best_r = r;
            best_psi = psi;
            best_chi = chi;
          }
        }
      }
    }
    dr /= 4.0;
    dpsi /= 4.0;
    dchi /= 4.0;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Rotation

double grid_search_rotation(const SystemParams& p, Position2D q, int grid_n) {
  if (grid_n < 2) throw Error(ErrorKind::DomainError, "grid_n must be >= 2");
  double best_phi = 0.0;
  double best_rho = -1.0;
  for (int i = 0; i < grid_n; ++i) {
    const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * (i + 1) / grid_n;
    const double rho = correlation_coefficient(p, q, phi);
    if (rho > best_rho + 1e-12) {
      best_rho = rho;
      best_phi = phi;
    }
  }
  return best_phi;
}

// ---------------------------------------------------------------------------
// Static hovering

namespace {

double oracle_rate(const SystemParams& p, Position2D q) {
  const double d = distance_3d(q, p.q_u, p.h_alt);
  return std::log2(1.0 + comm_constant(p) / (d * d));
}

double oracle_sensing(const SystemParams& p, Position2D q) {
  const double d = distance_3d(q, p.q_t, p.h_alt);
  return sensing_constant(p) / (d * d);
}

}  // namespace

GridHoverResult grid_search_hover(const SystemParams& p, double gamma_th, const Box& box,
                                  int grid_n) {
  if (grid_n < 1) throw Error(ErrorKind::DomainError, "grid_n must be >= 1");
  const double slack = 1e-12 * gamma_th;
  GridHoverResult best{{0.0, 0.0}, -std::numeric_limits<double>::infinity()};
  for (int i = 0; i <= grid_n; ++i) {
    const double x = box.x_min + (box.x_max - box.x_min) * i / grid_n;
    for (int j = 0; j <= grid_n; ++j) {
      const double y = box.y_min + (box.y_max - box.y_min) * j / grid_n;
      const Position2D q{x, y};
      if (oracle_sensing(p, q) < gamma_th - slack) continue;
      const double rate = oracle_rate(p, q);
      if (rate > best.rate) best = {q, rate};
    }
  }
  if (!std::isfinite(best.rate)) {
    throw Error(ErrorKind::Infeasible, "no grid point meets the sensing threshold");
  }
  return best;
}

// ---------------------------------------------------------------------------
// Free-form trajectories

namespace {

constexpr std::array<double, 8> kGlNodes{-0.9602898564975363, -0.7966664774136267,
                                         -0.5255324099163290, -0.1834346424956498,
                                         0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights{0.1012285362903763, 0.2223810344533745,
                                           0.3137066458778873, 0.3626837833783620,
                                           0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

struct LegIntegral {
  double rate = 0.0;
  double sensing = 0.0;
};

class Trajectory {
 public:
  Trajectory(const SystemParams& p, double gamma_th, double v, double t_total, int n_steps)
      : p_(p), gamma_th_(gamma_th), dt_(t_total / n_steps), t_total_(t_total),
        max_leg_(v * t_total / n_steps) {}

  void reset(std::vector<Position2D> pts) {
    pts_ = std::move(pts);
    legs_.resize(pts_.size() - 1);
    for (std::size_t k = 0; k + 1 < pts_.size(); ++k) legs_[k] = leg(pts_[k], pts_[k + 1]);
    resum();
  }

  void resum() {
    sum_ = {};
    for (const auto& l : legs_) {
      sum_.rate += l.rate;
      sum_.sensing += l.sensing;
    }
  }

  double avg_rate() const { return sum_.rate / t_total_; }
  double avg_sensing() const { return sum_.sensing / t_total_; }
  bool feasible() const { return avg_sensing() >= gamma_th_ * (1.0 - 1e-12); }

  double score() const {
    const double deficit = std::max(gamma_th_ - avg_sensing(), 0.0) / std::max(gamma_th_, 1e-300);
    return avg_rate() - 1e3 * deficit;
  }

  std::size_t size() const { return pts_.size(); }
  const std::vector<Position2D>& points() const { return pts_; }

  // Shifts points [first, last] by delta; reverts and returns false if a leg gets too long
  // or the penalized score does not improve.
  bool try_shift(std::size_t first, std::size_t last, Position2D delta) {
    const double before = score();
    const double limit = max_leg_ * (1.0 + 1e-12);
    if (first > 0 && norm(pts_[first] + delta - pts_[first - 1]) > limit) return false;
    if (last + 1 < pts_.size() && norm(pts_[last + 1] - pts_[last] - delta) > limit) return false;
    const std::size_t leg_lo = first > 0 ? first - 1 : first;
    const std::size_t leg_hi = std::min(last, legs_.size() - 1);  // inclusive
    std::vector<LegIntegral> saved(legs_.begin() + static_cast<std::ptrdiff_t>(leg_lo),
                                   legs_.begin() + static_cast<std::ptrdiff_t>(leg_hi) + 1);
    const LegIntegral saved_sum = sum_;
    for (std::size_t k = first; k <= last; ++k) pts_[k] = pts_[k] + delta;
    for (std::size_t k = leg_lo; k <= leg_hi; ++k) {
      sum_.rate -= legs_[k].rate;
      sum_.sensing -= legs_[k].sensing;
      legs_[k] = leg(pts_[k], pts_[k + 1]);
      sum_.rate += legs_[k].rate;
      sum_.sensing += legs_[k].sensing;
    }
    if (score() > before) {
      // Resum from scratch: incremental updates would let the search ratchet on rounding.
      resum();
      return true;
    }
    for (std::size_t k = first; k <= last; ++k) pts_[k] = pts_[k] - delta;
    std::copy(saved.begin(), saved.end(), legs_.begin() + static_cast<std::ptrdiff_t>(leg_lo));
    sum_ = saved_sum;
    return false;
  }

 private:
  LegIntegral leg(Position2D a, Position2D b) const {
    LegIntegral out;
    if (a == b) {
      out.rate = dt_ * oracle_rate(p_, a);
      out.sensing = dt_ * oracle_sensing(p_, a);
      return out;
    }
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      const Position2D q = lerp(a, b, 0.5 * (kGlNodes[i] + 1.0));
      out.rate += kGlWeights[i] * oracle_rate(p_, q);
      out.sensing += kGlWeights[i] * oracle_sensing(p_, q);
    }
    out.rate *= 0.5 * dt_;
    out.sensing *= 0.5 * dt_;
    return out;
  }

  const SystemParams& p_;
  double gamma_th_;
  double dt_;
  double t_total_;
  double max_leg_;
  std::vector<Position2D> pts_;
  std::vector<LegIntegral> legs_;
  LegIntegral sum_;
};

// Samples hover-fly-hover motion: tau_a at q_a, straight flight at speed v, rest at q_b.
std::vector<Position2D> sample_two_point(Position2D q_a, Position2D q_b, double tau_a, double v,
                                         double t_total, int n_steps) {
  const double length = norm(q_b - q_a);
  const double t_fly = length > 0.0 ? length / v : 0.0;
  std::vector<Position2D> pts(static_cast<std::size_t>(n_steps) + 1);
  for (int k = 0; k <= n_steps; ++k) {
    const double t = t_total * k / n_steps;
    Position2D q = q_b;
    if (t <= tau_a) {
      q = q_a;
    } else if (t < tau_a + t_fly) {
      q = lerp(q_a, q_b, (t - tau_a) / t_fly);
    }
    pts[static_cast<std::size_t>(k)] = q;
  }
  return pts;
}

}  // namespace

double discretized_trajectory_search(const SystemParams& p, double gamma_th, double v,
                                     double t_total, const TrajectorySearchOptions& opt,
                                     const std::optional<HfhPlan>& start) {
  if (opt.n_steps < 2) throw Error(ErrorKind::DomainError, "n_steps must be >= 2");
  const int n = opt.n_steps;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Trajectory traj(p, gamma_th, v, t_total, n);
  std::vector<std::vector<Position2D>> starts;
  if (start) {
    // A plan meeting the sensing constraint with equality loses a little
    // sensing when sampled. Lengthen the hover at q_a (the higher-sensing end)
    // just enough for the sampled trajectory to be feasible.
    auto sampled = [&](double tau_a) {
      return sample_two_point(start->q_a, start->q_b, tau_a, start->v, t_total, n);
    };
    double lo = start->tau_a;
    double hi = std::max(lo, t_total - start->t_fly);
    traj.reset(sampled(lo));
    if (!traj.feasible()) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        traj.reset(sampled(mid));
        (traj.feasible() ? hi : lo) = mid;
      }
      lo = hi;
    }
    starts.push_back(sampled(lo));
  }
  starts.push_back(std::vector<Position2D>(static_cast<std::size_t>(n) + 1, p.q_t));
  starts.push_back(std::vector<Position2D>(static_cast<std::size_t>(n) + 1, p.q_u));
  while (static_cast<int>(starts.size()) < std::max(opt.n_restarts, 1)) {
    const Position2D q_a = lerp(p.q_u, p.q_t, unit(rng));
    const Position2D q_b = lerp(p.q_u, p.q_t, unit(rng));
    const double t_fly = v > 0.0 ? norm(q_b - q_a) / v : (q_a == q_b ? 0.0 : t_total);
    if (!(t_fly < t_total)) continue;
    const double tau_a = unit(rng) * (t_total - t_fly);
    starts.push_back(sample_two_point(q_a, q_b, tau_a, v > 0.0 ? v : 1.0, t_total, n));
  }

  const double scene = std::max(user_target_distance(p), p.h_alt);
  double best = -std::numeric_limits<double>::infinity();
  for (auto& init : starts) {
    traj.reset(std::move(init));
    if (traj.feasible()) best = std::max(best, traj.avg_rate());
    double step = 0.05 * scene;
    int stale = 0;
    for (int move = 0; move < opt.moves_per_restart; ++move) {
      const std::size_t count = traj.size();
      std::size_t first = static_cast<std::size_t>(unit(rng) * static_cast<double>(count));
      first = std::min(first, count - 1);
      std::size_t last = first;
      if (unit(rng) < 0.3) {
        const auto span = static_cast<std::size_t>(unit(rng) * 0.5 * static_cast<double>(count));
        last = std::min(first + span, count - 1);
      }
      const Position2D delta{step * gauss(rng), step * gauss(rng)};
      if (traj.try_shift(first, last, delta)) {
        stale = 0;
        if (traj.feasible()) best = std::max(best, traj.avg_rate());
      } else if (++stale > 200) {
        step = std::max(step * 0.5, 1e-6 * scene);
        stale = 0;
      }
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::Infeasible, "no feasible discretized trajectory found");
  }
  return best;
}

double quadrature_reference(const std::function<double(double)>& f, double a, double b,
                            double rel_tol) {
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  return adaptive_simpson(f, a, b, opt);
}

}  // namespace raisac
