#pragma once

#include <span>
#include <vector>

#include "raisac/geometry.hpp"

namespace raisac {

struct RegionPoint {
  double gamma_th = 0.0;  // linear sensing SNR threshold
  double rate = 0.0;      // bits/s/Hz
};

/// Points ordered by strictly increasing gamma_th.
struct RegionCurve {
  std::vector<RegionPoint> points;
};

struct HoverSolution {
  Position2D q_star;
  double rate = 0.0;
  bool constraint_active = false;
};

/// Largest feasible sensing threshold for static hovering, B / H^2.
double feasibility_limit(const SystemParams& p);

/// Threshold below which hovering over the user already meets the sensing
/// constraint, B / (D_h^2 + H^2).
double plateau_limit(const SystemParams& p);

/// Optimal static hovering location for a sensing threshold. Throws
/// Error(InfeasibleSensing) above feasibility_limit and Error(DomainError) for
/// negative thresholds.
HoverSolution optimal_hover(const SystemParams& p, double gamma_th);

/// Optimal static rate as a function of the threshold (piecewise closed form).
double optimal_rate(const SystemParams& p, double gamma_th);

/// Samples optimal_rate on a log-spaced grid ending at feasibility_limit.
/// The grid starts at a tenth of plateau_limit so the flat part is visible.
RegionCurve region_curve(const SystemParams& p, int n_points);

/// Closed-form second derivative of optimal_rate on the open interval
/// (plateau_limit, feasibility_limit). Throws Error(DomainError) outside it.
double rate_second_derivative(const SystemParams& p, double gamma);

struct NonconvexityTest {
  bool nonconvex = false;
  double threshold_m2 = 0.0;  // D_h^2 must exceed this
};

NonconvexityTest is_region_nonconvex(const SystemParams& p);

/// Vertices of the upper concave hull of `points` in the (gamma, rate) plane.
/// Points sharing a gamma keep only the largest rate.
std::vector<RegionPoint> upper_concave_hull(std::span<const RegionPoint> points);

/// Piecewise-linear evaluation of a hull at `gamma`, clamped at both ends.
double envelope_value(std::span<const RegionPoint> hull, double gamma);

/// Time-sharing bound: the upper concave envelope of `curve`, with the axis
/// point (0, first rate) added, evaluated at the curve's own abscissae.
RegionCurve ts_bound(const RegionCurve& curve);

}  // namespace raisac
