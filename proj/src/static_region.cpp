#include "raisac/static_region.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "raisac/beamforming.hpp"
#include "raisac/error.hpp"

namespace raisac {

namespace {

void check_threshold(const SystemParams& p, double gamma_th) {
  if (!(gamma_th >= 0.0)) throw Error(ErrorKind::DomainError, "gamma_th must be >= 0");
  if (gamma_th > feasibility_limit(p) * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InfeasibleSensing, "gamma_th exceeds B/H^2");
  }
}

// Horizontal radius of the feasibility disk around the target.
double feasible_radius(const SystemParams& p, double gamma_th) {
  const double h2 = p.h_alt * p.h_alt;
  return std::sqrt(std::max(sensing_constant(p) / gamma_th - h2, 0.0));
}

}  // namespace

double feasibility_limit(const SystemParams& p) {
  return sensing_constant(p) / (p.h_alt * p.h_alt);
}

double plateau_limit(const SystemParams& p) {
  const double d_h = user_target_distance(p);
  return sensing_constant(p) / (d_h * d_h + p.h_alt * p.h_alt);
}

HoverSolution optimal_hover(const SystemParams& p, double gamma_th) {
  check_threshold(p, gamma_th);
  HoverSolution out;
  if (gamma_th <= plateau_limit(p)) {
    out.q_star = p.q_u;
    out.constraint_active = false;
  } else {
    const double d_h = user_target_distance(p);
    const double r_h = std::min(feasible_radius(p, gamma_th), d_h);
    out.q_star = p.q_t + (r_h / d_h) * (p.q_u - p.q_t);
    out.constraint_active = true;
  }
  out.rate = rate_at_optimum(p, out.q_star);
  return out;
}

double optimal_rate(const SystemParams& p, double gamma_th) {
  check_threshold(p, gamma_th);
  const double a = comm_constant(p);
  const double h2 = p.h_alt * p.h_alt;
  if (gamma_th <= plateau_limit(p)) return std::log2(1.0 + a / h2);
  const double d_h = user_target_distance(p);
  const double gap = d_h - std::min(feasible_radius(p, gamma_th), d_h);
  return std::log2(1.0 + a / (gap * gap + h2));
}

RegionCurve region_curve(const SystemParams& p, int n_points) {
  if (n_points < 2) throw Error(ErrorKind::DomainError, "region_curve needs n_points >= 2");
  const double hi = feasibility_limit(p);
  const double lo = std::min(plateau_limit(p), hi) / 10.0;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  RegionCurve curve;
  curve.points.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    double g = std::exp(log_lo + (log_hi - log_lo) * i / (n_points - 1));
    if (i == n_points - 1) g = hi;
    curve.points.push_back({g, optimal_rate(p, g)});
  }
  return curve;
}

double rate_second_derivative(const SystemParams& p, double gamma) {
  const double lo = plateau_limit(p);
  const double hi = feasibility_limit(p);
  if (!(gamma > lo && gamma < hi)) {
    throw Error(ErrorKind::DomainError, "second derivative defined only on the open interval");
  }
  const double a = comm_constant(p);
  const double b = sensing_constant(p);
  const double h2 = p.h_alt * p.h_alt;
  const double d_h = user_target_distance(p);

  const double s = std::sqrt(b / gamma - h2);
  const double gap = d_h - s;
  const double g = gap * gap + h2;
  const double m = b * b * g * (g + a) * d_h - 2.0 * b * b * gap * gap * s * (2.0 * g + a) -
                   4.0 * b * gap * gamma * s * s * g * (g + a);
  const double den = g * (g + a);
  // M carries the sign; the positive factor 2 Gamma^4 s^3 completes the magnitude.
  const double scale = 2.0 * std::pow(gamma, 4) * s * s * s;
  return -(a / std::numbers::ln2) * m / (den * den * scale);
}

NonconvexityTest is_region_nonconvex(const SystemParams& p) {
  const double a = comm_constant(p);
  const double h2 = p.h_alt * p.h_alt;
  const double root_1 = std::sqrt(h2 + a);
  const double root_4 = std::sqrt(4.0 * h2 + a);
  // (4/3) r1 (r4 - r1) rewritten as (4/3) r1 * 3H^2 / (r4 + r1).
  const double threshold = 4.0 * h2 * root_1 / (root_4 + root_1);
  const double d_h = user_target_distance(p);
  return {d_h * d_h > threshold, threshold};
}

std::vector<RegionPoint> upper_concave_hull(std::span<const RegionPoint> points) {
  std::vector<RegionPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const RegionPoint& l, const RegionPoint& r) {
    return l.gamma_th < r.gamma_th || (l.gamma_th == r.gamma_th && l.rate > r.rate);
  });
  sorted.erase(std::unique(sorted.begin(), sorted.end(),
                           [](const RegionPoint& l, const RegionPoint& r) {
                             return l.gamma_th == r.gamma_th;
                           }),
               sorted.end());

  std::vector<RegionPoint> hull;
  for (const auto& pt : sorted) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double cross = (a.gamma_th - o.gamma_th) * (pt.rate - o.rate) -
                           (a.rate - o.rate) * (pt.gamma_th - o.gamma_th);
      if (cross < 0.0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  return hull;
}

double envelope_value(std::span<const RegionPoint> hull, double gamma) {
  if (hull.empty()) return 0.0;
  if (gamma <= hull.front().gamma_th) return hull.front().rate;
  if (gamma >= hull.back().gamma_th) return hull.back().rate;
  const auto it = std::upper_bound(
      hull.begin(), hull.end(), gamma,
      [](double g, const RegionPoint& pt) { return g < pt.gamma_th; });
  const auto& right = *it;
  const auto& left = *(it - 1);
  const double t = (gamma - left.gamma_th) / (right.gamma_th - left.gamma_th);
  return left.rate + t * (right.rate - left.rate);
}

RegionCurve ts_bound(const RegionCurve& curve) {
  if (curve.points.empty()) return {};
  std::vector<RegionPoint> augmented = curve.points;
  if (curve.points.front().gamma_th > 0.0) {
    augmented.push_back({0.0, curve.points.front().rate});
  }
  const auto hull = upper_concave_hull(augmented);
  RegionCurve out;
  out.points.reserve(curve.points.size());
  for (const auto& pt : curve.points) {
    out.points.push_back({pt.gamma_th, std::max(envelope_value(hull, pt.gamma_th), pt.rate)});
  }
  return out;
}

}  // namespace raisac
