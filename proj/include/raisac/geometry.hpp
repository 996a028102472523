#pragma once

#include <complex>
#include <vector>

namespace raisac {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

struct Position2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position2D&, const Position2D&) = default;
};

inline Position2D operator+(Position2D a, Position2D b) { return {a.x + b.x, a.y + b.y}; }
inline Position2D operator-(Position2D a, Position2D b) { return {a.x - b.x, a.y - b.y}; }
inline Position2D operator*(double s, Position2D a) { return {s * a.x, s * a.y}; }

double norm(Position2D p);
double squared_norm(Position2D p);

/// Point at fraction s along the segment from `from` to `to`.
Position2D lerp(Position2D from, Position2D to, double s);

/// Scalar constants of the scenario. Defaults are the reference simulation setup.
struct SystemParams {
  int m_t = 12;
  int m_r = 16;
  double p_max = 0.1;       // W
  double beta_0 = 1e-4;     // channel power gain at 1 m
  double sigma_c2 = 1e-18;  // W
  double sigma_r2 = 1e-18;  // W
  double alpha = 0.9;
  double lambda = 0.03;  // m
  double h_alt = 50.0;   // m
  Position2D q_u{0.0, 0.0};
  Position2D q_t{300.0, 100.0};
  double v_max = 10.0;     // m/s
  double t_total = 400.0;  // s
  // When set, the sensing SNR carries the M_r receive array gain.
  bool include_mr_in_sensing = false;
};

/// Throws Error(InvalidParams) if any invariant on `p` is violated.
void validate(const SystemParams& p);

/// A = p_max * beta_0 * m_t / sigma_c2.
double comm_constant(const SystemParams& p);
/// B = alpha^2 * p_max * beta_0 * m_t / sigma_r2, times m_r if the flag is set.
double sensing_constant(const SystemParams& p);
double mr_factor(const SystemParams& p);
/// Horizontal user-target separation D_h.
double user_target_distance(const SystemParams& p);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double theta);

double azimuth_angle(Position2D q_uav, Position2D q_ground);
double distance_3d(Position2D q_uav, Position2D q_ground, double h_alt);

/// Half-wavelength ULA response: entry k is exp(j*pi*k*sin(theta)).
ComplexVector steering_vector(double theta, int m);

Complex inner_product(const ComplexVector& a, const ComplexVector& b);  // a^H b
double squared_norm(const ComplexVector& v);
double norm(const ComplexVector& v);

ComplexVector comm_channel(const SystemParams& p, Position2D q, double phi);

struct SensingChannelFactors {
  double gain = 0.0;  // alpha * sqrt(beta_0) / d_s
  ComplexVector a_r;  // receive steering vector, length m_r
  ComplexVector a_t;  // transmit steering vector at theta_s - phi
};

/// Rank-one factorization G_s = gain * a_r * a_t^H. The target-to-GBS angle is fixed at 0.
SensingChannelFactors sensing_channel_factors(const SystemParams& p, Position2D q, double phi);

/// Sensing SNR of beamformer w at (q, phi), under the params' M_r convention.
double sensing_snr(const SystemParams& p, Position2D q, double phi, const ComplexVector& w);
/// |h_c^H w|^2 / sigma_c2.
double comm_snr(const SystemParams& p, Position2D q, double phi, const ComplexVector& w);

/// |h_c^H h_t| / (|h_c| |h_t|) evaluated from the channel vectors.
double correlation_coefficient(const SystemParams& p, Position2D q, double phi);

/// Dirichlet-kernel form |sin(M pi x) / (M sin(pi x))| with
/// x = sin((theta_u - theta_s)/2) cos((theta_u + theta_s)/2 - phi).
double correlation_dirichlet(double theta_u, double theta_s, double phi, int m_t);

}  // namespace raisac
