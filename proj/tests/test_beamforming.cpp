#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "raisac/beamforming.hpp"
#include "raisac/error.hpp"

using namespace raisac;
using std::numbers::pi;

namespace {

double full_power_sensing(const SystemParams& p, Position2D q) {
  const auto f = sensing_channel_factors(p, q, 0.0);
  return p.p_max * f.gain * f.gain * mr_factor(p) * p.m_t / p.sigma_r2;
}

}  // namespace

TEST_CASE("zero threshold is the MRT branch") {
  SystemParams p;
  const Position2D q{100, 30};
  const double phi = -0.4;
  const auto s = max_comm_snr_given_rotation(p, q, phi, 0.0);
  CHECK_FALSE(s.constraint_active);
  const double mrt = p.p_max * squared_norm(comm_channel(p, q, phi)) / p.sigma_c2;
  CHECK(s.snr_c == doctest::Approx(mrt).epsilon(1e-12));
}

TEST_CASE("aligned rotation at the largest threshold keeps the MRT value") {
  SystemParams p;
  const Position2D q{100, 30};
  const double phi = optimal_rotation(p, q);
  const auto s = max_comm_snr_given_rotation(p, q, phi, full_power_sensing(p, q));
  CHECK(s.snr_c == doctest::Approx(comm_constant(p) / std::pow(distance_3d(q, p.q_u, p.h_alt), 2))
                       .epsilon(1e-9));
}

TEST_CASE("returned beamformer attains the SNR and meets both constraints") {
  SystemParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-50, 350), y(-50, 150), ang(-pi, pi), u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const Position2D q{x(rng), y(rng)};
    const double phi = ang(rng);
    const double g = u(rng) * full_power_sensing(p, q);
    const auto s = max_comm_snr_given_rotation(p, q, phi, g);
    CHECK(squared_norm(s.w) <= p.p_max * (1.0 + 1e-12));
    CHECK(sensing_snr(p, q, phi, s.w) >= g * (1.0 - 1e-9));
    CHECK(comm_snr(p, q, phi, s.w) == doctest::Approx(s.snr_c).epsilon(1e-9));
    CHECK(s.rho == doctest::Approx(correlation_coefficient(p, q, phi)).epsilon(1e-12));
  }
}

TEST_CASE("branches agree at the boundary") {
  SystemParams p;
  const Position2D q{200, 20};
  const double phi = 0.9;
  const double boundary = sensing_snr(p, q, phi, mrt_beamformer(p, q, phi));
  const auto below = max_comm_snr_given_rotation(p, q, phi, boundary * (1.0 - 1e-10));
  const auto above = max_comm_snr_given_rotation(p, q, phi, boundary * (1.0 + 1e-10));
  CHECK_FALSE(below.constraint_active);
  CHECK(above.constraint_active);
  CHECK(above.snr_c == doctest::Approx(below.snr_c).epsilon(1e-9));
}

TEST_CASE("communication SNR is nondecreasing in the correlation") {
  // Sweep the rotation from a poorly aligned angle to the optimum at a fixed threshold.
  SystemParams p;
  const Position2D q{150, 0};
  const double g = 0.5 * full_power_sensing(p, q);
  const double phi_star = optimal_rotation(p, q);
  double prev_rho = -1.0, prev_snr = -1.0;
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k <= 400; ++k) {
    const double phi = phi_star + 0.5 * (1.0 - k / 400.0);
    const auto s = max_comm_snr_given_rotation(p, q, phi, g);
    samples.emplace_back(s.rho, s.snr_c);
  }
  std::sort(samples.begin(), samples.end());
  for (const auto& [rho, snr] : samples) {
    if (rho > prev_rho) CHECK(snr >= prev_snr * (1.0 - 1e-12));
    prev_rho = rho;
    prev_snr = snr;
  }
}

TEST_CASE("unreachable threshold") {
  SystemParams p;
  const Position2D q{10, 10};
  try {
    max_comm_snr_given_rotation(p, q, 0.0, 1.01 * full_power_sensing(p, q));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleSensing);
  }
}

TEST_CASE("optimal_rotation") {
  SystemParams p;
  SUBCASE("both azimuths zero") {
    p.q_u = {100, 0};
    p.q_t = {200, 0};
    CHECK(optimal_rotation(p, {0, 0}) == doctest::Approx(pi / 2));
  }
  SUBCASE("midpoint of the reference geometry") {
    // User and target lie in opposite directions, so the bisector plus a
    // quarter turn equals the target azimuth.
    const Position2D mid{150, 50};
    const double tu = azimuth_angle(mid, p.q_u);
    const double ts = azimuth_angle(mid, p.q_t);
    CHECK(optimal_rotation(p, mid) == doctest::Approx(wrap_angle((tu + ts) / 2 + pi / 2)));
    CHECK(optimal_rotation(p, mid) == doctest::Approx(std::atan2(50.0, 150.0)));
    CHECK(correlation_coefficient(p, mid, optimal_rotation(p, mid)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("the opposite orientation is equivalent") {
    const Position2D q{37, 91};
    const double a = optimal_rotation(p, q);
    const double b = wrap_angle(a + pi);
    CHECK(correlation_coefficient(p, q, b) == doctest::Approx(1.0).epsilon(1e-9));
    const double g = 0.7 * full_power_sensing(p, q);
    CHECK(max_comm_snr_given_rotation(p, q, b, g).snr_c ==
          doctest::Approx(max_comm_snr_given_rotation(p, q, a, g).snr_c).epsilon(1e-9));
  }
  SUBCASE("reaches unit correlation everywhere") {
    for (double x = -50; x <= 350; x += 20) {
      for (double y = -50; y <= 150; y += 20) {
        const Position2D q{x, y};
        const double phi = optimal_rotation(p, q);
        CHECK(phi > -pi);
        CHECK(phi <= pi);
        CHECK(correlation_coefficient(p, q, phi) >= 1.0 - 1e-9);
      }
    }
  }
}

TEST_CASE("mrt_beamformer") {
  SystemParams p;
  const Position2D q{60, 70};
  const double phi = 1.2;
  const auto w = mrt_beamformer(p, q, phi);
  CHECK(squared_norm(w) == doctest::Approx(0.1).epsilon(1e-12));
  for (const auto& x : w) CHECK(std::abs(x) == doctest::Approx(std::sqrt(0.1 / 12)).epsilon(1e-12));
  const auto h = comm_channel(p, q, phi);
  CHECK(std::norm(inner_product(h, w)) == doctest::Approx(p.p_max * squared_norm(h)).epsilon(1e-12));
}

TEST_CASE("SNRs and rate at the optimum") {
  SystemParams p;
  CHECK(snr_pair_at_optimum(p, p.q_u).snr_c == doctest::Approx(4.8e10));
  CHECK(snr_pair_at_optimum(p, p.q_t).gamma_s == doctest::Approx(3.888e10));
  CHECK(rate_at_optimum(p, p.q_u) == doctest::Approx(35.48231535).epsilon(1e-9));
  CHECK(rate_at_optimum(p, p.q_t) == doctest::Approx(30.12476335).epsilon(1e-9));
  // Radial symmetry around the target.
  const double r = 75.0;
  CHECK(sensing_snr_at_optimum(p, {p.q_t.x + r, p.q_t.y}) ==
        doctest::Approx(sensing_snr_at_optimum(p, {p.q_t.x, p.q_t.y - r})));

  // Direct evaluation with the aligned rotation and MRT.
  for (Position2D q : {Position2D{0, 0}, Position2D{150, 50}, Position2D{-20, 130}}) {
    const double phi = optimal_rotation(p, q);
    const auto w = mrt_beamformer(p, q, phi);
    const auto pair = snr_pair_at_optimum(p, q);
    CHECK(comm_snr(p, q, phi, w) == doctest::Approx(pair.snr_c).epsilon(1e-9));
    CHECK(sensing_snr(p, q, phi, w) == doctest::Approx(pair.gamma_s).epsilon(1e-9));
  }
}
