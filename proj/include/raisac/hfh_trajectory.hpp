#pragma once

#include <vector>

#include "raisac/geometry.hpp"

namespace raisac {

/// Hover at q_a for tau_a, fly straight to q_b at speed v, hover at q_b for tau_b.
/// q_a is always the hover point with the larger sensing SNR.
struct HfhPlan {
  Position2D q_a;
  Position2D q_b;
  double tau_a = 0.0;
  double tau_b = 0.0;
  double t_fly = 0.0;
  double v = 0.0;
  double t_total = 0.0;
};

struct AverageMetrics {
  double avg_rate = 0.0;     // bits/s/Hz
  double avg_sensing = 0.0;  // linear SNR
};

/// Straight-line flight time; 0 when the points coincide, +inf when v == 0 and they differ.
double flight_time(Position2D q_a, Position2D q_b, double v);

/// Builds a plan with tau_a = mu * T_hov and tau_b = (1 - mu) * T_hov.
/// Throws Error(ZeroHoverTime) when the flight does not fit in t_total.
HfhPlan make_hfh_plan(Position2D q_a, Position2D q_b, double mu, double v, double t_total);

/// UAV position at time t. Throws Error(DomainError) outside [0, t_total].
Position2D hfh_position(const HfhPlan& plan, double t);

/// Integral of the optimal-rotation sensing SNR along the straight flight
/// from q_a to q_b at speed v, in SNR * seconds (arctangent closed form).
double flight_sensing_integral(const SystemParams& p, Position2D q_a, Position2D q_b, double v);
double flight_sensing_integral(const SystemParams& p, Position2D q_a, Position2D q_b);

/// Integral of the optimal-rotation rate along the same flight, in bits/s/Hz * seconds.
double flight_rate_integral(const SystemParams& p, Position2D q_a, Position2D q_b, double v);
double flight_rate_integral(const SystemParams& p, Position2D q_a, Position2D q_b);

AverageMetrics average_metrics(const SystemParams& p, const HfhPlan& plan);

/// Hover-time share at q_a that makes the average sensing SNR equal gamma_th,
/// projected onto [0, 1]. Throws Error(ZeroHoverTime) if the flight takes the
/// whole mission and Error(DegenerateSensing) if both points sense equally.
double time_share_mu(const SystemParams& p, Position2D q_a, Position2D q_b, double gamma_th,
                     double v, double t_total);

struct TimeAllocation {
  double tau_a = 0.0;
  double tau_b = 0.0;
};

/// Hover-time split between q_a and q_b when flight time is negligible.
/// Requires Gamma(q_a) > Gamma(q_b) and gamma_th between them, else Error(InfeasiblePair).
TimeAllocation infinite_speed_allocation(const SystemParams& p, Position2D q_a, Position2D q_b,
                                         double gamma_th, double t_total);

struct HfhSolution {
  HfhPlan plan;
  AverageMetrics metrics;
  double s_a = 0.0;  // segment coordinate of plan.q_a (0 = user, 1 = target)
  double s_b = 0.0;  // segment coordinate of plan.q_b
  double mu = 0.0;   // share of hover time spent at q_a
};

/// Searches hover pairs on the user-target segment for the best average rate
/// at speed p.v_max over p.t_total. Flight integrals along the segment are
/// tabulated once, so one solver can serve many thresholds.
class HfhSolver {
 public:
  HfhSolver(const SystemParams& p, int grid_n = 201);

  /// Throws Error(Infeasible) when no pair meets gamma_th.
  HfhSolution solve(double gamma_th) const;

  const SystemParams& params() const { return params_; }

 private:
  struct Candidate {
    double s_lo = 0.0;
    double s_hi = 0.0;
    double avg_rate = 0.0;
    double t_fly = 0.0;
    bool feasible = false;
  };

  // Threshold plus the smallest segment coordinate whose hover point meets it.
  struct Target {
    double gamma_th = 0.0;
    double s_min = 0.0;
  };

  Candidate evaluate(const Target& t, double s_lo, double s_hi, double rate_integral,
                     double sensing_integral) const;
  Candidate evaluate_direct(const Target& t, double s_lo, double s_hi) const;
  Position2D at(double s) const;

  SystemParams params_;
  int grid_n_;
  double length_ = 0.0;
  // Arc-length integrals of rate and sensing from the user end to grid node i.
  std::vector<double> cum_rate_;
  std::vector<double> cum_sensing_;
};

HfhSolution optimize_hfh(const SystemParams& p, double gamma_th, int grid_n = 201);

}  // namespace raisac
