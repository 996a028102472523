#pragma once

#include "raisac/geometry.hpp"

namespace raisac {

struct BeamformerSolution {
  ComplexVector w;  // sqrt(W) amplitude units
  double snr_c = 0.0;
  double rho = 0.0;
  bool constraint_active = false;
};

struct SnrPair {
  double snr_c = 0.0;
  double gamma_s = 0.0;
};

/// Maximum communication SNR for a fixed position and array rotation, subject
/// to the sensing SNR threshold `gamma_th` and the power budget.
///
/// The two-subspace closed form is applied to the communication channel h_c and
/// the amplitude-scaled sensing direction h_s = sqrt(beta_0)/d_s * a_t(theta_s - phi),
/// with the threshold mapped to gamma_th * sigma_r2 / (alpha^2 * M_r factor).
/// When the MRT beam already meets the threshold it is returned unchanged;
/// otherwise the beam spends exactly the power needed on h_s and the remainder
/// on the part of h_c orthogonal to it.
///
/// Throws Error(InfeasibleSensing) if gamma_th exceeds the full-power sensing SNR.
BeamformerSolution max_comm_snr_given_rotation(const SystemParams& p, Position2D q, double phi,
                                               double gamma_th);

/// Rotation aligning the communication and sensing subspaces, wrapped to (-pi, pi].
/// The other solution of the +-pi/2 pair is optimal_rotation + pi.
double optimal_rotation(const SystemParams& p, Position2D q);

/// sqrt(p_max) * h_c / |h_c|.
ComplexVector mrt_beamformer(const SystemParams& p, Position2D q, double phi);

/// Communication and sensing SNRs under optimal rotation and MRT: A/d_c^2 and B/d_s^2.
SnrPair snr_pair_at_optimum(const SystemParams& p, Position2D q);

/// B / d_s^2(q).
double sensing_snr_at_optimum(const SystemParams& p, Position2D q);

/// log2(1 + A/d_c^2(q)) in bits/s/Hz.
double rate_at_optimum(const SystemParams& p, Position2D q);

}  // namespace raisac
