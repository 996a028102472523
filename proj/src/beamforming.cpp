#include "raisac/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "raisac/error.hpp"

namespace raisac {

namespace {

constexpr double kBranchTolerance = 1e-12;

}  // namespace

BeamformerSolution max_comm_snr_given_rotation(const SystemParams& p, Position2D q, double phi,
                                               double gamma_th) {
  if (!(gamma_th >= 0.0)) {
    throw Error(ErrorKind::DomainError, "gamma_th must be >= 0");
  }
  const ComplexVector h_c = comm_channel(p, q, phi);
  const double d_s = distance_3d(q, p.q_t, p.h_alt);
  ComplexVector h_s = steering_vector(azimuth_angle(q, p.q_t) - phi, p.m_t);
  for (auto& z : h_s) z *= std::sqrt(p.beta_0) / d_s;

  const double hc2 = squared_norm(h_c);
  const double hs2 = squared_norm(h_s);
  const double hs_norm = std::sqrt(hs2);
  const double threshold = gamma_th * p.sigma_r2 / (p.alpha * p.alpha * mr_factor(p));

  if (threshold > p.p_max * hs2 * (1.0 + kBranchTolerance)) {
    throw Error(ErrorKind::InfeasibleSensing,
                "threshold " + std::to_string(gamma_th) + " exceeds full-power sensing SNR");
  }

  // c = u_s^H h_c with u_s = h_s / |h_s|.
  const Complex c = inner_product(h_s, h_c) / hs_norm;
  const double rho = std::min(std::abs(c) / std::sqrt(hc2), 1.0);

  BeamformerSolution out;
  out.rho = rho;
  if (p.p_max * rho * rho * hs2 >= threshold * (1.0 - kBranchTolerance)) {
    out.w = mrt_beamformer(p, q, phi);
    out.snr_c = p.p_max * hc2 / p.sigma_c2;
    out.constraint_active = false;
    return out;
  }

  const double spare = std::max(hs2 * p.p_max - threshold, 0.0);
  const double amp = rho * std::sqrt(threshold) + std::sqrt(1.0 - rho * rho) * std::sqrt(spare);
  out.snr_c = hc2 / (p.sigma_c2 * hs2) * amp * amp;
  out.constraint_active = true;

  const double cos_psi = std::min(std::sqrt(threshold / (p.p_max * hs2)), 1.0);
  const double sin_psi = std::sqrt(1.0 - cos_psi * cos_psi);
  const Complex align = std::abs(c) > 0.0 ? c / std::abs(c) : Complex{1.0, 0.0};

  ComplexVector perp(h_c.size());
  for (std::size_t i = 0; i < h_c.size(); ++i) perp[i] = h_c[i] - c * h_s[i] / hs_norm;
  const double perp_norm = norm(perp);

  out.w.resize(h_c.size());
  const double root_p = std::sqrt(p.p_max);
  for (std::size_t i = 0; i < h_c.size(); ++i) {
    Complex wi = cos_psi * align * h_s[i] / hs_norm;
    if (perp_norm > 0.0) wi += sin_psi * perp[i] / perp_norm;
    out.w[i] = root_p * wi;
  }
  return out;
}

double optimal_rotation(const SystemParams& p, Position2D q) {
  const double theta_u = azimuth_angle(q, p.q_u);
  const double theta_s = azimuth_angle(q, p.q_t);
  return wrap_angle(0.5 * (theta_u + theta_s) + 0.5 * std::numbers::pi);
}

ComplexVector mrt_beamformer(const SystemParams& p, Position2D q, double phi) {
  ComplexVector w = comm_channel(p, q, phi);
  const double scale = std::sqrt(p.p_max) / norm(w);
  for (auto& z : w) z *= scale;
  return w;
}

double sensing_snr_at_optimum(const SystemParams& p, Position2D q) {
  return sensing_constant(p) / (squared_norm(q - p.q_t) + p.h_alt * p.h_alt);
}

SnrPair snr_pair_at_optimum(const SystemParams& p, Position2D q) {
  return {comm_constant(p) / (squared_norm(q - p.q_u) + p.h_alt * p.h_alt),
          sensing_snr_at_optimum(p, q)};
}

double rate_at_optimum(const SystemParams& p, Position2D q) {
  return std::log2(1.0 + snr_pair_at_optimum(p, q).snr_c);
}

}  // namespace raisac
