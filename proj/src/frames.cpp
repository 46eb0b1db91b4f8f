#include "cbloch/frames.hpp"

#include <cmath>

#include "cbloch/errors.hpp"

namespace cbloch {

BiorthoFrame bloch_frame(const ComplexAnglePath& path) {
  auto at = [path](double t) { return sample(path, t); };

  BiorthoFrame frame;
  frame.dim = 2;
  frame.right = [at](int m, double t) {
    const auto s = at(t);
    const Complex c = std::cos(0.5 * s.theta);
    const Complex sn = std::sin(0.5 * s.theta);
    Vector2c v;
    if (m == 0)
      v << c, sn * std::exp(im * s.phi);
    else
      v << -sn * std::exp(-im * s.phi), c;
    return VectorXc(v);
  };
  frame.left = [at](int m, double t) {
    // same closed form with conjugated angles, which makes the bra rows the
    // inverse of the right-vector matrix (its determinant is identically 1)
    const auto s = at(t);
    const Complex theta = std::conj(s.theta);
    const Complex phi = std::conj(s.phi);
    const Complex c = std::cos(0.5 * theta);
    const Complex sn = std::sin(0.5 * theta);
    Vector2c v;
    if (m == 0)
      v << c, sn * std::exp(im * phi);
    else
      v << -sn * std::exp(-im * phi), c;
    return VectorXc(v);
  };
  frame.right_deriv = [at](int m, double t) {
    const auto s = at(t);
    const Complex c = std::cos(0.5 * s.theta);
    const Complex sn = std::sin(0.5 * s.theta);
    const Complex half_dt = 0.5 * s.dtheta;
    Vector2c v;
    if (m == 0) {
      const Complex e = std::exp(im * s.phi);
      v << -half_dt * sn, (half_dt * c + im * s.dphi * sn) * e;
    } else {
      const Complex e = std::exp(-im * s.phi);
      v << (-half_dt * c + im * s.dphi * sn) * e, -half_dt * sn;
    }
    return VectorXc(v);
  };
  frame.alpha_rate = [at](int m, double t) {
    const auto s = at(t);
    const Complex sn = std::sin(0.5 * s.theta);
    const double rate = (s.dphi * sn * sn).real();
    return m == 0 ? -rate : rate;
  };
  return frame;
}

double frame_biortho_residual(const BiorthoFrame& frame, double t) {
  MatrixXc gram(frame.dim, frame.dim);
  for (int m = 0; m < frame.dim; ++m) {
    const VectorXc lm = frame.left(m, t);
    for (int n = 0; n < frame.dim; ++n) gram(m, n) = lm.dot(frame.right(n, t));
  }
  return (gram - MatrixXc::Identity(frame.dim, frame.dim)).norm();
}

MatrixXc hamiltonian_from_frames(const BiorthoFrame& frame, double t, double dt) {
  if (frame.dim <= 0 || !frame.right || !frame.left)
    throw ValidationError("hamiltonian_from_frames: frame is incomplete");
  if (!(dt > 0)) throw ValidationError("hamiltonian_from_frames: dt must be positive");
  if (frame_biortho_residual(frame, t) > 1e-8)
    throw NumericalError("hamiltonian_from_frames: biorthonormality broken at t");

  const int n = frame.dim;
  MatrixXc h = MatrixXc::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    const VectorXc right = frame.right(m, t);
    const VectorXc left = frame.left(m, t);
    const VectorXc deriv = frame.right_deriv
                               ? frame.right_deriv(m, t)
                               : VectorXc(((frame.right(m, t + dt) - frame.right(m, t - dt)) /
                                           (2.0 * dt))
                                              .eval());
    const double rate =
        frame.alpha_rate ? frame.alpha_rate(m, t) : -left.dot(deriv).imag();
    h += im * deriv * left.adjoint() - rate * right * left.adjoint();
  }
  return h;
}

}  // namespace cbloch
