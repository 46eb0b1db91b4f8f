#pragma once

#include <functional>
#include <string>

#include "cbloch/paths.hpp"
#include "cbloch/types.hpp"

namespace cbloch {

enum class PhaseRoute { time_integral, line_integral, solid_angle };

std::string route_name(PhaseRoute route);
PhaseRoute route_from_name(const std::string& name);

// Geometric phase pair for the two frame states. The three routes share one
// underlying loop integral but compute it through different representations,
// so their mutual agreement is a real consistency check, never a tautology.
struct PhaseResult {
  double alpha_plus = 0;   // phase of the + state
  double alpha_minus = 0;  // always the exact negative of alpha_plus
  PhaseRoute route = PhaseRoute::time_integral;
  Complex raw;             // the route's own complex loop value
  bool pole_fallback = false;  // line route rerouted through the time integral
};

// alpha_pm = -+ Re of the loop integral of dphi sin^2(theta/2)
PhaseResult phase_time_integral(const ComplexAnglePath& path, int n_quad = 4096);

// alpha_plus = Re of the loop integral of a_phi sin(theta) dphi; fails on
// connection poles (|sin theta| <= 1e-9 anywhere on the loop)
PhaseResult phase_line_integral(const ComplexAnglePath& path, int n_quad = 4096);

// complex solid angle as the Stokes line form: loop integral of
// (1 - cos theta) dphi
struct SolidAngleResult {
  Complex omega;
};
SolidAngleResult solid_angle(const ComplexAnglePath& path, int n_quad = 4096);

// alpha_pm = -+ Re(omega / 2)
PhaseResult phase_solid_angle(const ComplexAnglePath& path, int n_quad = 4096);

// dispatcher; the line route falls back to the time integral on pole hits,
// marked by pole_fallback
PhaseResult compute_phase(const ComplexAnglePath& path, PhaseRoute route, int n_quad = 4096);

// azimuthal component of the adiabatic-free connection; the polar component
// vanishes identically
struct ConnectionValue {
  Complex a_phi;
  Complex theta, phi;
};

// a_phi = -sin^2(theta/2) / sin(theta); evaluated both from that closed form
// and from the frame inner product as a built-in self-check
ConnectionValue connection_at(Complex theta, Complex phi);

// radial curl of the connection, evaluated analytically; equals -1/2 at
// every regular point
Complex curvature_at(Complex theta, Complex phi);

// scalar gauge function on the angle plane; derivative closures are optional
// and replaced by central differences when absent
struct GaugeFunction {
  std::function<Complex(Complex theta, Complex phi)> value;
  std::function<Complex(Complex theta, Complex phi)> d_theta;
  std::function<Complex(Complex theta, Complex phi)> d_phi;
};

struct GaugeReport {
  double delta_alpha_plus = 0;   // |alpha_plus(transformed) - alpha_plus|
  double chi_loop_mismatch = 0;  // |chi(end) - chi(start)| on the loop
  bool pass = false;             // delta_alpha_plus <= 1e-9
};

// recomputes alpha_plus with the connection shifted by the gradient of chi;
// rejects chi that fails to return to its starting value around the loop
GaugeReport gauge_invariance_check(const ComplexAnglePath& path, const GaugeFunction& chi,
                                   int n_quad = 4096);

}  // namespace cbloch
