#include "raisac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "raisac/error.hpp"

namespace raisac {

double norm(Position2D p) { return std::hypot(p.x, p.y); }
double squared_norm(Position2D p) { return p.x * p.x + p.y * p.y; }

Position2D lerp(Position2D from, Position2D to, double s) {
  return {from.x + s * (to.x - from.x), from.y + s * (to.y - from.y)};
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidParams, what);
}

}  // namespace

void validate(const SystemParams& p) {
  require(p.m_t >= 1, "m_t must be >= 1");
  require(p.m_r >= 1, "m_r must be >= 1");
  require(p.p_max > 0.0, "p_max must be > 0");
  require(p.beta_0 > 0.0, "beta_0 must be > 0");
  require(p.sigma_c2 > 0.0, "sigma_c2 must be > 0");
  require(p.sigma_r2 > 0.0, "sigma_r2 must be > 0");
  require(p.alpha > 0.0 && p.alpha <= 1.0, "alpha must be in (0, 1]");
  require(p.lambda > 0.0, "lambda must be > 0");
  require(p.h_alt > 0.0, "h_alt must be > 0");
  require(std::isfinite(p.q_u.x) && std::isfinite(p.q_u.y), "q_u must be finite");
  require(std::isfinite(p.q_t.x) && std::isfinite(p.q_t.y), "q_t must be finite");
  require(p.v_max >= 0.0, "v_max must be >= 0");
  require(p.t_total > 0.0, "t_total must be > 0");
}

double comm_constant(const SystemParams& p) {
  return p.p_max * p.beta_0 * p.m_t / p.sigma_c2;
}

double mr_factor(const SystemParams& p) {
  return p.include_mr_in_sensing ? static_cast<double>(p.m_r) : 1.0;
}

double sensing_constant(const SystemParams& p) {
  return p.alpha * p.alpha * p.p_max * p.beta_0 * p.m_t * mr_factor(p) / p.sigma_r2;
}

double user_target_distance(const SystemParams& p) { return norm(p.q_t - p.q_u); }

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(theta, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

double azimuth_angle(Position2D q_uav, Position2D q_ground) {
  const double dx = q_ground.x - q_uav.x;
  const double dy = q_ground.y - q_uav.y;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  return std::atan2(dy, dx);
}

double distance_3d(Position2D q_uav, Position2D q_ground, double h_alt) {
  return std::sqrt(squared_norm(q_uav - q_ground) + h_alt * h_alt);
}

ComplexVector steering_vector(double theta, int m) {
  ComplexVector a(static_cast<std::size_t>(m));
  const double step = std::numbers::pi * std::sin(theta);
  for (int k = 0; k < m; ++k) a[static_cast<std::size_t>(k)] = std::polar(1.0, step * k);
  return a;
}

Complex inner_product(const ComplexVector& a, const ComplexVector& b) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double squared_norm(const ComplexVector& v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

double norm(const ComplexVector& v) { return std::sqrt(squared_norm(v)); }

ComplexVector comm_channel(const SystemParams& p, Position2D q, double phi) {
  const double d_c = distance_3d(q, p.q_u, p.h_alt);
  const double theta_u = azimuth_angle(q, p.q_u);
  const Complex scale = std::polar(std::sqrt(p.beta_0) / d_c,
                                   -2.0 * std::numbers::pi * d_c / p.lambda);
  ComplexVector h = steering_vector(theta_u - phi, p.m_t);
  for (auto& z : h) z *= scale;
  return h;
}

SensingChannelFactors sensing_channel_factors(const SystemParams& p, Position2D q, double phi) {
  const double d_s = distance_3d(q, p.q_t, p.h_alt);
  const double theta_s = azimuth_angle(q, p.q_t);
  constexpr double theta_r = 0.0;
  return {p.alpha * std::sqrt(p.beta_0) / d_s, steering_vector(theta_r, p.m_r),
          steering_vector(theta_s - phi, p.m_t)};
}

double sensing_snr(const SystemParams& p, Position2D q, double phi, const ComplexVector& w) {
  const auto f = sensing_channel_factors(p, q, phi);
  return f.gain * f.gain * mr_factor(p) * std::norm(inner_product(f.a_t, w)) / p.sigma_r2;
}

double comm_snr(const SystemParams& p, Position2D q, double phi, const ComplexVector& w) {
  return std::norm(inner_product(comm_channel(p, q, phi), w)) / p.sigma_c2;
}

double correlation_coefficient(const SystemParams& p, Position2D q, double phi) {
  const ComplexVector h_c = comm_channel(p, q, phi);
  const ComplexVector h_t = steering_vector(azimuth_angle(q, p.q_t) - phi, p.m_t);
  const double rho = std::abs(inner_product(h_c, h_t)) / (norm(h_c) * norm(h_t));
  return std::min(rho, 1.0);
}

double correlation_dirichlet(double theta_u, double theta_s, double phi, int m_t) {
  const double zeta_1 = 0.5 * (theta_u - theta_s);
  const double zeta_2 = 0.5 * (theta_u + theta_s);
  const double x = std::sin(zeta_1) * std::cos(zeta_2 - phi);
  // Only the offset from the nearest integer matters for the magnitude.
  const double r = x - std::round(x);
  const double den = m_t * std::sin(std::numbers::pi * r);
  if (std::abs(den) < 1e-9 * m_t) return 1.0;
  return std::min(std::abs(std::sin(m_t * std::numbers::pi * r) / den), 1.0);
}

}  // namespace raisac
