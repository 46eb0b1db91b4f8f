#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cbloch/types.hpp"

namespace cbloch {

// trajectory value (theta, phi) and its time derivative at one instant
struct PathSample {
  double t = 0.0;
  Complex theta, phi, dtheta, dphi;
};

// one piecewise-smooth piece of a trajectory; the closures are closed forms
// valid on the closed interval [t_start, t_end]
struct PathSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  std::function<Complex(double)> theta, phi, dtheta, dphi;

  PathSample eval(double t) const { return {t, theta(t), phi(t), dtheta(t), dphi(t)}; }
};

// A closed trajectory (theta(t), phi(t)) of complex polar/azimuthal angles.
// Segments partition [t0, tf] with no gaps; values are continuous across
// junctions while derivatives may jump.
class ComplexAnglePath {
 public:
  ComplexAnglePath(std::string family, std::map<std::string, double> params,
                   std::vector<PathSegment> segments);

  const std::string& family() const { return family_; }
  const std::map<std::string, double>& params() const { return params_; }
  const std::vector<PathSegment>& segments() const { return segments_; }
  double t0() const { return segments_.front().t_start; }
  double tf() const { return segments_.back().t_end; }
  double duration() const { return tf() - t0(); }

  // interior segment boundaries, ascending; empty for single-segment paths
  std::vector<double> junctions() const;

  // index of the segment evaluated at t (right limit at junctions, last
  // segment at tf); throws if t is outside [t0, tf]
  std::size_t segment_index(double t) const;

  // stable identifier built from family and parameters
  std::string id() const;

 private:
  std::string family_;
  std::map<std::string, double> params_;
  std::vector<PathSegment> segments_;
};

// Builds one of the built-in closed families.
//   circle          theta0, phi0, T            latitude circle at theta0
//   mlm             theta0, phi0, theta1, T,   meridian down, full latitude
//                   f1, f2                     circle at theta1, meridian back
//   complex-circle  circle + beta, gamma       sin^2 imaginary bumps on both angles
//   complex-mlm     mlm + beta, gamma          per-segment sin^2 imaginary bumps
// Omitted optional keys take defaults (phi0=0, T=1, beta=gamma=0, f1=f2=1/3).
ComplexAnglePath make_path(const std::string& family,
                           const std::map<std::string, double>& params);

// names and parameter keys of the built-in families, for CLI listings
struct PathFamilyInfo {
  std::string name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
};
std::vector<PathFamilyInfo> list_path_families();

// value and exact derivative at t; right-limit derivative at junctions
PathSample sample(const ComplexAnglePath& path, double t);

// boundary-condition and closure residuals of a path
struct ClosureReport {
  double im_theta_start = 0, im_theta_end = 0;
  double im_phi_start = 0, im_phi_end = 0;
  double theta_mismatch = 0;
  double phi_mismatch_mod_2pi = 0;
  // populated only when derivative realness is checked (strict mode)
  bool derivatives_checked = false;
  double im_dtheta_start = 0, im_dtheta_end = 0;
  double im_dphi_start = 0, im_dphi_end = 0;
  double tol = 0;
  bool pass = false;

  double max_residual() const;
};

ClosureReport validate_closure(const ComplexAnglePath& path, double tol = 1e-10,
                               bool check_derivative_realness = false);

// throws NumericalError unless theta/phi close up (phi modulo 2pi) within tol
void require_closed(const ComplexAnglePath& path, double tol = 1e-8);

// Time reparametrization t -> g(t) with smooth monotone g fixing the
// endpoints; g_inverse of the original junctions becomes the new junctions.
ComplexAnglePath reparametrize(const ComplexAnglePath& path,
                               const std::function<double(double)>& g,
                               const std::function<double(double)>& g_dot);

// the cubic smoothstep reparametrization of a path over its own time span
ComplexAnglePath reparametrize_smoothstep(const ComplexAnglePath& path);

// same trajectory with phi(t) shifted by a constant (possibly complex) offset
ComplexAnglePath shift_phi(const ComplexAnglePath& path, Complex offset);

}  // namespace cbloch
