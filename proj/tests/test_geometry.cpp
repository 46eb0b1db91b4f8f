#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cbloch/errors.hpp"
#include "cbloch/geometry.hpp"

using namespace cbloch;

namespace {

std::vector<ComplexAnglePath> builtin_paths() {
  return {
      make_path("circle", {{"theta0", pi / 6}}),
      make_path("circle", {{"theta0", pi / 2}}),
      make_path("circle", {{"theta0", 2 * pi / 3}}),
      make_path("mlm", {{"theta0", pi / 2}, {"theta1", pi / 3}}),
      make_path("complex-circle", {{"theta0", pi / 2}, {"beta", 0.1}}),
      make_path("complex-mlm",
                {{"theta0", pi / 2}, {"theta1", pi / 3}, {"beta", 0.1}, {"gamma", 0.07}}),
  };
}

// closed loop that touches the south pole at one interior instant
ComplexAnglePath pole_touching_loop() {
  PathSegment seg;
  seg.t_start = 0.0;
  seg.t_end = 1.0;
  seg.theta = [](double t) { return Complex(pi / 2 + (pi / 2) * std::sin(2 * pi * t), 0); };
  seg.phi = [](double t) { return Complex(2 * pi * t, 0); };
  seg.dtheta = [](double t) { return Complex(pi * pi * std::cos(2 * pi * t), 0); };
  seg.dphi = [](double) { return Complex(2 * pi, 0); };
  return ComplexAnglePath("custom", {}, {seg});
}

ComplexAnglePath constant_point_loop() {
  PathSegment seg;
  seg.t_start = 0.0;
  seg.t_end = 1.0;
  seg.theta = [](double) { return Complex(1.1, 0); };
  seg.phi = [](double) { return Complex(0.7, 0); };
  seg.dtheta = [](double) { return Complex(0, 0); };
  seg.dphi = [](double) { return Complex(0, 0); };
  return ComplexAnglePath("custom", {}, {seg});
}

}  // namespace

TEST_CASE("latitude circles give the spherical-cap phase") {
  for (double theta0 : {pi / 6, pi / 2, 2 * pi / 3}) {
    const auto path = make_path("circle", {{"theta0", theta0}});
    const double expected = pi * (1 - std::cos(theta0));
    INFO("theta0=" << theta0);
    CHECK(std::abs(phase_time_integral(path).alpha_minus - expected) <= 1e-9);
  }
  CHECK(phase_time_integral(make_path("circle", {{"theta0", 2 * pi / 3}})).alpha_minus ==
        doctest::Approx(3 * pi / 2).epsilon(1e-12));
  // a shrinking cap carries a vanishing phase
  CHECK(std::abs(phase_time_integral(make_path("circle", {{"theta0", 1e-3}})).alpha_minus) <=
        1e-5);
}

TEST_CASE("meridian legs contribute nothing to the mlm phase") {
  const auto path = make_path("mlm", {{"theta0", pi / 2}, {"theta1", pi / 3}});
  CHECK(phase_time_integral(path).alpha_minus == doctest::Approx(pi / 2).epsilon(1e-12));
}

TEST_CASE("the three routes agree on every built-in path") {
  for (const auto& path : builtin_paths()) {
    const auto t = phase_time_integral(path);
    const auto l = phase_line_integral(path);
    const auto s = phase_solid_angle(path);
    INFO(path.id());
    CHECK(std::abs(t.alpha_minus - l.alpha_minus) <= 1e-9);
    CHECK(std::abs(t.alpha_minus - s.alpha_minus) <= 1e-9);
    CHECK(t.alpha_plus + t.alpha_minus == 0.0);
    CHECK(l.alpha_plus + l.alpha_minus == 0.0);
    CHECK(s.alpha_plus + s.alpha_minus == 0.0);
  }
}

TEST_CASE("line route on the equatorial circle") {
  const auto r = phase_line_integral(make_path("circle", {{"theta0", pi / 2}}));
  CHECK(r.alpha_plus == doctest::Approx(-pi).epsilon(1e-12));
  CHECK(r.raw.real() == doctest::Approx(-pi).epsilon(1e-12));
}

TEST_CASE("solid angle of caps and complex loops") {
  const auto flat = solid_angle(make_path("circle", {{"theta0", pi / 2}}));
  CHECK(std::abs(flat.omega - Complex(2 * pi, 0)) <= 1e-10);

  for (double theta0 : {0.4, 1.2, 2.6}) {
    const auto cap = solid_angle(make_path("circle", {{"theta0", theta0}}));
    CHECK(std::abs(cap.omega - Complex(2 * pi * (1 - std::cos(theta0)), 0)) <= 1e-10);
  }

  const auto path = make_path("complex-circle", {{"theta0", pi / 2}, {"beta", 0.1}});
  const auto tilted = solid_angle(path);
  CHECK(tilted.omega.imag() != 0.0);
  CHECK(std::abs(-0.5 * tilted.omega.real() - phase_time_integral(path).alpha_plus) <= 1e-9);
}

TEST_CASE("a constant-point loop carries no phase") {
  const auto path = constant_point_loop();
  CHECK(phase_time_integral(path).alpha_plus == 0.0);
  CHECK(phase_line_integral(path).alpha_plus == 0.0);
  CHECK(phase_solid_angle(path).alpha_plus == 0.0);
}

TEST_CASE("connection values and pole behavior") {
  CHECK(std::abs(connection_at(pi / 2, 0.0).a_phi - Complex(-0.5, 0)) <= 1e-15);

  // removable at the north pole: a_phi = -theta/4 + O(theta^3)
  for (double theta : {1e-4, 1e-3, 1e-2}) {
    const Complex a = connection_at(theta, 1.0).a_phi;
    CHECK(std::abs(a + theta / 4.0) <= theta * theta * theta);
  }

  // complex point agrees with the closed form computed out-of-band
  const Complex theta{pi / 2, 0.1};
  const Complex half = std::sin(0.5 * theta);
  CHECK(std::abs(connection_at(theta, 0.3).a_phi + half * half / std::sin(theta)) <= 1e-15);

  CHECK_THROWS_AS(connection_at(0.0, 0.0), NumericalError);
  CHECK_THROWS_AS(connection_at(pi, 0.0), NumericalError);
}

TEST_CASE("curvature is minus one half everywhere") {
  CHECK(curvature_at(pi / 2, 0.0) == Complex(-0.5, 0));
  CHECK(std::abs(curvature_at(Complex(1.0, 0.3), 1.7) + 0.5) <= 1e-15);

  std::mt19937_64 rng(20241001);
  std::uniform_real_distribution<double> re(0.3, pi - 0.3), imag(-0.4, 0.4), ph(-pi, pi);
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const Complex theta{re(rng), imag(rng)};
    const Complex phi{ph(rng), imag(rng)};
    CHECK(std::abs(curvature_at(theta, phi) + 0.5) <= 1e-12);

    // finite-difference radial curl of the connection
    auto a_sin = [](Complex th) {
      return connection_at(th, 0.0).a_phi * std::sin(th);
    };
    const Complex curl = (a_sin(theta + h) - a_sin(theta - h)) / (2 * h) / std::sin(theta);
    CHECK(std::abs(curl + 0.5) <= 1e-6);
  }

  CHECK_THROWS_AS(curvature_at(1e-10, 0.0), NumericalError);
}

TEST_CASE("single-valued gauge functions leave the phase alone") {
  const auto path = make_path("circle", {{"theta0", pi / 2}});

  GaugeFunction constant;
  constant.value = [](Complex, Complex) { return Complex(0.7, -0.2); };
  const auto flat = gauge_invariance_check(path, constant);
  CHECK(flat.delta_alpha_plus <= 1e-15);
  CHECK(flat.pass);

  GaugeFunction wave;
  wave.value = [](Complex th, Complex ph) { return 0.3 * std::sin(th) * std::cos(ph); };
  const auto fd = gauge_invariance_check(path, wave);
  CHECK(fd.pass);
  CHECK(fd.delta_alpha_plus <= 1e-9);

  // same chi with analytic derivatives supplied
  wave.d_theta = [](Complex th, Complex ph) { return 0.3 * std::cos(th) * std::cos(ph); };
  wave.d_phi = [](Complex th, Complex ph) { return -0.3 * std::sin(th) * std::sin(ph); };
  const auto analytic = gauge_invariance_check(path, wave);
  CHECK(analytic.pass);

  GaugeFunction complex_valued;
  complex_valued.value = [](Complex th, Complex ph) {
    return Complex(0, 0.2) * std::cos(th) * std::sin(ph);
  };
  CHECK(gauge_invariance_check(make_path("complex-circle", {{"theta0", pi / 2}, {"beta", 0.1}}),
                               complex_valued)
            .pass);
}

TEST_CASE("a winding gauge function is rejected") {
  const auto path = make_path("circle", {{"theta0", pi / 2}});
  GaugeFunction winding;
  winding.value = [](Complex, Complex ph) { return ph; };
  CHECK_THROWS_AS(gauge_invariance_check(path, winding), ValidationError);
}

TEST_CASE("phases are blind to the traversal rate") {
  for (const auto& path : builtin_paths()) {
    const auto warped = reparametrize_smoothstep(path);
    INFO(path.id());
    CHECK(std::abs(phase_time_integral(path).alpha_plus -
                   phase_time_integral(warped).alpha_plus) <= 1e-9);
    CHECK(std::abs(phase_line_integral(path).alpha_plus -
                   phase_line_integral(warped).alpha_plus) <= 1e-9);
    CHECK(std::abs(phase_solid_angle(path).alpha_plus -
                   phase_solid_angle(warped).alpha_plus) <= 1e-9);
  }
}

TEST_CASE("pole-touching loops reroute the line integral") {
  const auto loop = pole_touching_loop();
  CHECK_THROWS_AS(phase_line_integral(loop), NumericalError);

  const auto fallback = compute_phase(loop, PhaseRoute::line_integral);
  CHECK(fallback.pole_fallback);
  CHECK(fallback.route == PhaseRoute::line_integral);
  const auto direct = phase_time_integral(loop);
  CHECK(fallback.alpha_plus == direct.alpha_plus);
  CHECK(std::abs(fallback.raw + direct.raw) <= 1e-15);

  // the ordinary dispatcher paths stay untouched
  CHECK_FALSE(compute_phase(make_path("circle", {{"theta0", pi / 2}}),
                            PhaseRoute::line_integral)
                  .pole_fallback);
}

TEST_CASE("route names round-trip") {
  for (PhaseRoute route : {PhaseRoute::time_integral, PhaseRoute::line_integral,
                           PhaseRoute::solid_angle})
    CHECK(route_from_name(route_name(route)) == route);
  CHECK_THROWS_AS(route_from_name("surface"), ValidationError);
}
