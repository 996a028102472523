#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "raisac/error.hpp"
#include "raisac/geometry.hpp"

using namespace raisac;
using std::numbers::pi;

TEST_CASE("parameter validation") {
  SystemParams p;
  CHECK_NOTHROW(validate(p));
  auto rejects = [](SystemParams bad) {
    try {
      validate(bad);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::InvalidParams;
    }
    return false;
  };
  SystemParams bad = p;
  bad.m_t = 0;
  CHECK(rejects(bad));
  bad = p;
  bad.alpha = 1.5;
  CHECK(rejects(bad));
  bad = p;
  bad.h_alt = 0.0;
  CHECK(rejects(bad));
  bad = p;
  bad.sigma_r2 = -1.0;
  CHECK(rejects(bad));
  bad = p;
  bad.v_max = -1.0;
  CHECK(rejects(bad));
  bad = p;
  bad.q_t.x = std::nan("");
  CHECK(rejects(bad));
}

TEST_CASE("derived constants") {
  SystemParams p;
  CHECK(comm_constant(p) == doctest::Approx(1.2e14));
  CHECK(sensing_constant(p) == doctest::Approx(9.72e13));
  p.include_mr_in_sensing = true;
  CHECK(sensing_constant(p) == doctest::Approx(16 * 9.72e13));
  CHECK(user_target_distance(p) == doctest::Approx(std::sqrt(1e5)));
}

TEST_CASE("azimuth_angle") {
  CHECK(azimuth_angle({0, 0}, {1, 0}) == doctest::Approx(0.0));
  CHECK(azimuth_angle({0, 0}, {0, 1}) == doctest::Approx(pi / 2));
  CHECK(azimuth_angle({150, 50}, {0, 0}) == doctest::Approx(-2.8198420991931510));
  CHECK(azimuth_angle({7, 7}, {7, 7}) == 0.0);
}

TEST_CASE("distance_3d") {
  CHECK(distance_3d({0, 0}, {0, 0}, 50) == 50.0);
  CHECK(distance_3d({300, 100}, {0, 0}, 50) == doctest::Approx(std::sqrt(102500.0)));
  CHECK(distance_3d({3, 4}, {0, 0}, 1e-9) == doctest::Approx(5.0));
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_angle(0.25) == 0.25);
  for (double t = -20.0; t < 20.0; t += 0.37) {
    const double w = wrap_angle(t);
    CHECK(w > -pi);
    CHECK(w <= pi);
    CHECK(std::remainder(w - t, 2 * pi) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("steering_vector") {
  const auto a = steering_vector(0.0, 4);
  REQUIRE(a.size() == 4);
  for (const auto& x : a) CHECK(std::abs(x - Complex{1, 0}) < 1e-15);

  const auto b = steering_vector(pi / 2, 2);
  CHECK(std::abs(b[1] - Complex{-1, 0}) < 1e-15);

  const auto c = steering_vector(pi / 6, 3);
  CHECK(std::abs(c[1] - Complex{0, 1}) < 1e-15);
  CHECK(std::abs(c[2] - Complex{-1, 0}) < 1e-15);

  for (double th : {-2.0, 0.3, 1.1}) {
    CHECK(squared_norm(steering_vector(th, 12)) == doctest::Approx(12.0).epsilon(1e-15));
  }
}

TEST_CASE("comm_channel") {
  SystemParams p;
  CHECK(squared_norm(comm_channel(p, {0, 0}, 0.7)) == doctest::Approx(4.8e-7).epsilon(1e-12));
  const Position2D q{80, -30};
  const double d = distance_3d(q, p.q_u, p.h_alt);
  for (double phi : {-1.0, 0.0, 2.5}) {
    const auto h = comm_channel(p, q, phi);
    CHECK(squared_norm(h) * d * d == doctest::Approx(p.beta_0 * p.m_t).epsilon(1e-12));
    CHECK(std::abs(h[0]) == doctest::Approx(std::sqrt(p.beta_0) / d).epsilon(1e-12));
  }
}

TEST_CASE("sensing_channel_factors") {
  SystemParams p;
  const auto f = sensing_channel_factors(p, p.q_t, 0.0);
  CHECK(f.gain == doctest::Approx(1.8e-4));
  CHECK(squared_norm(f.a_r) == doctest::Approx(16.0));
  const Position2D q{40, 10};
  const auto g = sensing_channel_factors(p, q, azimuth_angle(q, p.q_t));
  for (const auto& x : g.a_t) CHECK(std::abs(x - Complex{1, 0}) < 1e-12);
}

TEST_CASE("correlation coefficient") {
  SystemParams p;
  SUBCASE("shared bearing gives one for every rotation") {
    p.q_u = {100, 0};
    p.q_t = {250, 0};
    for (double phi : {-2.0, 0.0, 1.3}) {
      CHECK(correlation_coefficient(p, {0, 0}, phi) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("inner-product and Dirichlet forms agree") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-pi, pi);
    for (int i = 0; i < 1000; ++i) {
      const double tu = ang(rng), ts = ang(rng), phi = ang(rng);
      const auto au = steering_vector(tu - phi, p.m_t);
      const auto as = steering_vector(ts - phi, p.m_t);
      const double direct = std::abs(inner_product(au, as)) / p.m_t;
      CHECK(std::abs(correlation_dirichlet(tu, ts, phi, p.m_t) - direct) <= 1e-12);
    }
  }
  SUBCASE("removable singularities evaluate to one") {
    CHECK(correlation_dirichlet(0.4, 0.4, 1.0, 12) == 1.0);
    // x = sin(pi/2) cos(0) = 1, an integer.
    CHECK(correlation_dirichlet(pi / 2, -pi / 2, 0.0, 12) == doctest::Approx(1.0));
  }
  SUBCASE("channel-level value matches the angle-level form") {
    const Position2D q{120, 60};
    const double tu = azimuth_angle(q, p.q_u);
    const double ts = azimuth_angle(q, p.q_t);
    CHECK(correlation_coefficient(p, q, 0.2) ==
          doctest::Approx(correlation_dirichlet(tu, ts, 0.2, p.m_t)).epsilon(1e-12));
  }
}
