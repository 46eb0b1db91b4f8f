#include "cbloch/gates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cbloch/errors.hpp"
#include "cbloch/linalg.hpp"

namespace cbloch {

GateSpec build_gate(double theta, double phi, double alpha) {
  GateSpec g;
  g.theta = theta;
  g.phi = phi;
  g.alpha = alpha;
  const Vector3d axis(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                      std::cos(theta));
  g.matrix = su2_exponential(alpha, axis);
  return g;
}

double gate_fidelity(const Matrix2c& v, const Matrix2c& u) {
  const double denom = std::abs((v * v.adjoint()).trace());
  if (denom < 1e-14)
    throw ValidationError("gate_fidelity: reference gate has vanishing Tr(V V^dag)");
  return std::abs((v * u.adjoint()).trace()) / denom;
}

Matrix2c deviated_gate(double theta, double phi, double alpha, const DeviationSpec& dev) {
  if (std::abs(dev.dphi1) > dev.guard || std::abs(dev.dphi2) > dev.guard)
    throw ValidationError("deviated_gate: offset outside the small-deviation guard");
  const Complex azimuth = Complex(phi + dev.dphi1, dev.dphi2);
  const Complex nx = std::sin(theta) * std::cos(azimuth);
  const Complex ny = std::sin(theta) * std::sin(azimuth);
  const Complex nz = std::cos(theta);
  const Matrix2c n_sigma = pauli_combine(2.0 * nx, 2.0 * ny, 2.0 * nz);
  return std::cos(alpha) * Matrix2c::Identity() - im * std::sin(alpha) * n_sigma;
}

double DriveComparison::max_detuning_gap() const {
  return detuning_gap.empty() ? 0.0
                              : *std::max_element(detuning_gap.begin(), detuning_gap.end());
}

double DriveComparison::max_rabi_gap() const {
  double worst = 0.0;
  for (double g : rabi1_gap) worst = std::max(worst, g);
  for (double g : rabi2_gap) worst = std::max(worst, g);
  return worst;
}

DeviationOutcome apply_polar_deviation(const ComplexAnglePath& path, const DeviationSpec& dev,
                                       int n_samples) {
  if (std::abs(dev.dphi1) > dev.guard || std::abs(dev.dphi2) > dev.guard)
    throw ValidationError("apply_polar_deviation: offset outside the small-deviation guard");

  DeviationOutcome out{shift_phi(path, Complex(dev.dphi1, dev.dphi2)), {}, {}, {}};
  out.original = extract_physical(synthesize_pulses(path, n_samples));
  out.shifted = extract_physical(synthesize_pulses(out.shifted_path, n_samples));

  DriveComparison& cmp = out.comparison;
  cmp.times = out.original.times;
  const std::size_t n = cmp.times.size();
  for (std::size_t k = 0; k < n; ++k) {
    cmp.detuning_gap.push_back(std::abs(out.shifted.detuning[k] - out.original.detuning[k]));
    cmp.decay_gap.push_back(std::abs(out.shifted.decay_diff[k] - out.original.decay_diff[k]));
    cmp.rabi1_gap.push_back(std::abs(out.shifted.rabi1[k] - out.original.rabi1[k]));
    cmp.rabi2_gap.push_back(std::abs(out.shifted.rabi2[k] - out.original.rabi2[k]));
    const bool p1 = out.original.rabi1[k] >= 1e-12 && out.shifted.rabi1[k] >= 1e-12;
    const bool p2 = out.original.rabi2[k] >= 1e-12 && out.shifted.rabi2[k] >= 1e-12;
    cmp.phase1_defined.push_back(p1);
    cmp.phase2_defined.push_back(p2);
    cmp.phase1_shift.push_back(
        p1 ? std::remainder(out.shifted.phase1[k] - out.original.phase1[k], 2 * pi) : 0.0);
    cmp.phase2_shift.push_back(
        p2 ? std::remainder(out.shifted.phase2[k] - out.original.phase2[k], 2 * pi) : 0.0);
  }
  return out;
}

std::vector<double> deviation_invariant(const PhysicalDrive& a, const PhysicalDrive& b) {
  if (a.times.size() != b.times.size())
    throw ValidationError("deviation_invariant: drives sampled on different grids");
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) > 1e-12)
      throw ValidationError("deviation_invariant: drives sampled on different grids");
  }
  std::vector<double> residual(a.times.size());
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    const double pa = a.rabi1[k] * a.rabi2[k] * std::cos(a.phase1[k] - a.phase2[k]);
    const double pb = b.rabi1[k] * b.rabi2[k] * std::cos(b.phase1[k] - b.phase2[k]);
    residual[k] = std::abs(pa - pb);
  }
  return residual;
}

std::vector<RobustnessPoint> robustness_sweep(double theta, double phi, double alpha,
                                              const std::vector<double>& dphi1_grid,
                                              double theta0_ref) {
  const Matrix2c ideal = build_gate(theta, phi, alpha).matrix;
  std::vector<RobustnessPoint> points;
  points.reserve(dphi1_grid.size());
  for (double dphi1 : dphi1_grid) {
    RobustnessPoint p;
    p.deviation.dphi1 = dphi1;
    p.theta0_ref = theta0_ref;
    p.f_exact = gate_fidelity(deviated_gate(theta, phi, alpha, p.deviation), ideal);
    const double d2 = dphi1 * dphi1;
    const double sa = std::sin(alpha), st = std::sin(theta), s0 = std::sin(theta0_ref);
    p.f_quadratic_approx = 1.0 - 0.5 * sa * sa * st * st * d2;
    p.f_dynamical_ref = 1.0 - 0.5 * s0 * s0 * d2;
    p.f_holonomic_ref = 1.0 - 0.5 * sa * sa * d2;
    points.push_back(p);
  }
  return points;
}

void write_sweep_csv(const std::vector<RobustnessPoint>& points, std::ostream& out) {
  out << "dphi1,dphi2,f_exact,f_quadratic_approx,f_dynamical_ref,f_holonomic_ref\n";
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.deviation.dphi1,
                  p.deviation.dphi2, p.f_exact, p.f_quadratic_approx, p.f_dynamical_ref,
                  p.f_holonomic_ref);
    out << buf;
  }
}

std::string recognize_gate(const Matrix2c& u, double tol) {
  const Matrix2c paulis[4] = {Matrix2c::Identity(), sigma_x(), sigma_y(), sigma_z()};
  const char* pauli_names[4] = {"I", "X", "Y", "Z"};
  const Complex factors[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const char* prefixes[4] = {"", "-", "i", "-i"};
  for (int p = 0; p < 4; ++p) {
    for (int f = 0; f < 4; ++f) {
      if ((u - factors[f] * paulis[p]).norm() <= tol)
        return std::string(prefixes[f]) + pauli_names[p];
    }
  }
  return "";
}

Matrix2c named_gate(const std::string& name) {
  const Matrix2c paulis[4] = {Matrix2c::Identity(), sigma_x(), sigma_y(), sigma_z()};
  const char* pauli_names[4] = {"I", "X", "Y", "Z"};
  const Complex factors[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const char* prefixes[4] = {"", "-", "i", "-i"};
  for (int p = 0; p < 4; ++p)
    for (int f = 0; f < 4; ++f)
      if (name == std::string(prefixes[f]) + pauli_names[p]) return factors[f] * paulis[p];
  throw ValidationError("named_gate: unknown gate '" + name + "'");
}

}  // namespace cbloch
