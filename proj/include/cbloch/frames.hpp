#pragma once

#include <functional>

#include "cbloch/paths.hpp"
#include "cbloch/types.hpp"

namespace cbloch {

// A biorthonormal moving frame: right kets |phi_m(t)>, left kets
// |phitilde_m(t)> with <phitilde_m|phi_n> = delta_mn, and the real phase
// rates alpha_dot_m. right_deriv and alpha_rate are optional closed forms;
// when absent, consumers fall back to central differences.
struct BiorthoFrame {
  int dim = 0;
  std::function<VectorXc(int m, double t)> right;
  std::function<VectorXc(int m, double t)> left;
  std::function<VectorXc(int m, double t)> right_deriv;
  std::function<double(int m, double t)> alpha_rate;
};

// The two-level frame attached to a trajectory:
//   |phi_+> = (cos(theta/2), sin(theta/2) e^{+i phi})
//   |phi_-> = (-sin(theta/2) e^{-i phi}, cos(theta/2))
// left kets use the conjugated angles; closed-form derivatives and the
// geometric phase rates alpha_dot_pm = -+ Re(dphi sin^2(theta/2)) attached.
BiorthoFrame bloch_frame(const ComplexAnglePath& path);

// deviation of <phitilde_m|phi_n> from the identity at t (Frobenius norm)
double frame_biortho_residual(const BiorthoFrame& frame, double t);

// H(t) = sum_m [ i |dphi_m><phitilde_m| - alpha_dot_m |phi_m><phitilde_m| ];
// dt sets the central-difference stencil used when closed forms are absent;
// throws when biorthonormality at t is broken beyond 1e-8
MatrixXc hamiltonian_from_frames(const BiorthoFrame& frame, double t, double dt = 1e-7);

}  // namespace cbloch
