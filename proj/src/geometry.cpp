#include "cbloch/geometry.hpp"

#include <cmath>

#include "cbloch/errors.hpp"

namespace cbloch {

namespace {

// composite Simpson rule with n_quad panels on every segment; the integrand
// sees the segment so it can use the exact closed forms
Complex simpson_loop(const ComplexAnglePath& path,
                     const std::function<Complex(const PathSegment&, double)>& f, int n_quad) {
  if (n_quad < 1) throw ValidationError("quadrature needs at least one panel");
  Complex total = 0;
  for (const auto& seg : path.segments()) {
    const double h = (seg.t_end - seg.t_start) / (2.0 * n_quad);
    Complex acc = f(seg, seg.t_start) + f(seg, seg.t_end);
    for (int k = 1; k < 2 * n_quad; ++k)
      acc += f(seg, seg.t_start + k * h) * (k % 2 ? 4.0 : 2.0);
    total += acc * (h / 3.0);
  }
  return total;
}

PhaseResult from_alpha_plus(double alpha_plus, PhaseRoute route, Complex raw) {
  PhaseResult r;
  r.alpha_plus = alpha_plus;
  r.alpha_minus = -alpha_plus;
  r.route = route;
  r.raw = raw;
  return r;
}

}  // namespace

std::string route_name(PhaseRoute route) {
  switch (route) {
    case PhaseRoute::time_integral: return "time-integral";
    case PhaseRoute::line_integral: return "line-integral";
    case PhaseRoute::solid_angle: return "solid-angle";
  }
  return "unknown";
}

PhaseRoute route_from_name(const std::string& name) {
  if (name == "time-integral") return PhaseRoute::time_integral;
  if (name == "line-integral") return PhaseRoute::line_integral;
  if (name == "solid-angle") return PhaseRoute::solid_angle;
  throw ValidationError("unknown phase route '" + name + "'");
}

PhaseResult phase_time_integral(const ComplexAnglePath& path, int n_quad) {
  require_closed(path);
  const Complex raw = simpson_loop(
      path,
      [](const PathSegment& seg, double t) {
        const Complex sn = std::sin(0.5 * seg.theta(t));
        return seg.dphi(t) * sn * sn;
      },
      n_quad);
  return from_alpha_plus(-raw.real(), PhaseRoute::time_integral, raw);
}

PhaseResult phase_line_integral(const ComplexAnglePath& path, int n_quad) {
  require_closed(path);
  const Complex raw = simpson_loop(
      path,
      [](const PathSegment& seg, double t) {
        const ConnectionValue a = connection_at(seg.theta(t), seg.phi(t));
        return a.a_phi * std::sin(a.theta) * seg.dphi(t);
      },
      n_quad);
  return from_alpha_plus(raw.real(), PhaseRoute::line_integral, raw);
}

SolidAngleResult solid_angle(const ComplexAnglePath& path, int n_quad) {
  require_closed(path);
  SolidAngleResult r;
  r.omega = simpson_loop(
      path,
      [](const PathSegment& seg, double t) {
        return (1.0 - std::cos(seg.theta(t))) * seg.dphi(t);
      },
      n_quad);
  return r;
}

PhaseResult phase_solid_angle(const ComplexAnglePath& path, int n_quad) {
  const Complex omega = solid_angle(path, n_quad).omega;
  return from_alpha_plus(-0.5 * omega.real(), PhaseRoute::solid_angle, omega);
}

PhaseResult compute_phase(const ComplexAnglePath& path, PhaseRoute route, int n_quad) {
  switch (route) {
    case PhaseRoute::time_integral:
      return phase_time_integral(path, n_quad);
    case PhaseRoute::line_integral:
      try {
        return phase_line_integral(path, n_quad);
      } catch (const NumericalError&) {
        // the phase itself is finite at connection poles, only this
        // representation fails; reroute and flag it
        PhaseResult r = phase_time_integral(path, n_quad);
        r.route = PhaseRoute::line_integral;
        r.raw = -r.raw;  // line-route sign convention for the loop value
        r.pole_fallback = true;
        return r;
      }
    case PhaseRoute::solid_angle:
      return phase_solid_angle(path, n_quad);
  }
  throw ValidationError("compute_phase: unknown route");
}

ConnectionValue connection_at(Complex theta, Complex phi) {
  const Complex s = std::sin(theta);
  if (std::abs(s) <= 1e-12)
    throw NumericalError("connection_at: evaluation at a pole of the connection");
  const Complex half = std::sin(0.5 * theta);
  const Complex closed_form = -half * half / s;

  // independent evaluation through the frame inner product
  // i <phitilde_+| d/dphi |phi_+> = -sin^2(theta/2), then divide by sin(theta)
  const Complex inner = im * (im * half * half);
  const Complex via_frame = inner / s;
  if (std::abs(closed_form - via_frame) > 1e-12)
    throw NumericalError("connection_at: closed form and frame evaluation disagree");

  return {closed_form, theta, phi};
}

Complex curvature_at(Complex theta, Complex phi) {
  (void)phi;  // the curl is point-independent
  const Complex s = std::sin(theta);
  if (std::abs(s) <= 1e-9)
    throw NumericalError("curvature_at: evaluation at a pole of the connection");
  // radial curl of a purely azimuthal field: d/dtheta (a_phi sin theta) / sin theta,
  // with a_phi sin theta = -(1 - cos theta)/2
  const Complex d_theta = -0.5 * s;
  return d_theta / s;
}

GaugeReport gauge_invariance_check(const ComplexAnglePath& path, const GaugeFunction& chi,
                                   int n_quad) {
  if (!chi.value) throw ValidationError("gauge_invariance_check: chi has no value function");

  const auto start = sample(path, path.t0());
  const auto end = sample(path, path.tf());
  GaugeReport rep;
  rep.chi_loop_mismatch = std::abs(chi.value(end.theta, end.phi) - chi.value(start.theta, start.phi));
  if (rep.chi_loop_mismatch > 1e-10)
    throw ValidationError("gauge_invariance_check: chi is multivalued on the loop");

  const double h = 1e-6;
  auto d_theta = chi.d_theta;
  if (!d_theta)
    d_theta = [&chi, h](Complex th, Complex ph) {
      return (chi.value(th + h, ph) - chi.value(th - h, ph)) / (2 * h);
    };
  auto d_phi = chi.d_phi;
  if (!d_phi)
    d_phi = [&chi, h](Complex th, Complex ph) {
      return (chi.value(th, ph + h) - chi.value(th, ph - h)) / (2 * h);
    };

  const PhaseResult base = phase_line_integral(path, n_quad);
  // transformed connection: the gradient contributes the exact differential
  // of chi along the loop
  const Complex transformed_raw = simpson_loop(
      path,
      [&](const PathSegment& seg, double t) {
        const Complex theta = seg.theta(t);
        const Complex phi = seg.phi(t);
        const ConnectionValue a = connection_at(theta, phi);
        const Complex base_term = a.a_phi * std::sin(theta) * seg.dphi(t);
        const Complex grad_term = d_theta(theta, phi) * seg.dtheta(t) +
                                  d_phi(theta, phi) * seg.dphi(t);
        return base_term - grad_term;
      },
      n_quad);

  rep.delta_alpha_plus = std::abs(transformed_raw.real() - base.alpha_plus);
  rep.pass = rep.delta_alpha_plus <= 1e-9;
  return rep;
}

}  // namespace cbloch
