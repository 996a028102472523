#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "raisac/geometry.hpp"
#include "raisac/hfh_trajectory.hpp"

namespace raisac {

/// Outcome of checking one closed-form value against a brute-force value.
struct OracleReport {
  std::string claim_id;
  double closed_form = 0.0;
  double brute_force = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::uint64_t seed = 0;
};

/// Two-sided check: rel_error = |cf - bf| / max(|cf|, |bf|), with an absolute
/// fallback of 1e-12 when both magnitudes are below 1e-12.
OracleReport compare_values(std::string claim_id, double closed_form, double brute_force,
                            double tolerance, std::uint64_t seed = 0);

/// One-sided check for upper bounds: only brute_force above closed_form counts.
OracleReport compare_upper_bound(std::string claim_id, double closed_form, double brute_force,
                                 double tolerance, std::uint64_t seed = 0);

/// Exhaustive search over beamformers in span{h_c, a_t(theta_s - phi)} with
/// c = (r cos psi, r e^{j chi} sin psi), grid_n points per axis, followed by
/// zoomed re-gridding around the best feasible point. Returns the largest
/// communication SNR meeting the sensing threshold and the power budget.
/// Throws Error(Infeasible) if no grid point meets the threshold.
double brute_force_beamforming(const SystemParams& p, Position2D q, double phi, double gamma_th,
                               int grid_n);

/// Argmax of the correlation coefficient over grid_n uniform angles in (-pi, pi].
double grid_search_rotation(const SystemParams& p, Position2D q, int grid_n);

struct Box {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

struct GridHoverResult {
  Position2D q;
  double rate = 0.0;
};

/// Best feasible static hovering point on a grid with grid_n cells per axis
/// ((grid_n + 1)^2 nodes including the box corners).
GridHoverResult grid_search_hover(const SystemParams& p, double gamma_th, const Box& box,
                                  int grid_n);

struct TrajectorySearchOptions {
  int n_steps = 100;
  int n_restarts = 20;
  int moves_per_restart = 20000;
  std::uint64_t seed = 1;
};

/// Free-form trajectory falsifier. The trajectory is n_steps + 1 waypoints at
/// uniform times joined by straight constant-speed legs, each leg no longer
/// than v * dt. The average rate and sensing SNR are integrated exactly along
/// the legs (Gauss-Legendre), so every trajectory found is physically
/// realizable. Local search with a constraint penalty runs from the given
/// plan, hovering over the target, hovering over the user and random two-point
/// plans. Returns the best average rate among feasible trajectories.
/// Throws Error(Infeasible) if none was found.
double discretized_trajectory_search(const SystemParams& p, double gamma_th, double v,
                                     double t_total, const TrajectorySearchOptions& opt,
                                     const std::optional<HfhPlan>& start = std::nullopt);

/// Reference adaptive Simpson integral of f over [a, b].
double quadrature_reference(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-9);

}  // namespace raisac
