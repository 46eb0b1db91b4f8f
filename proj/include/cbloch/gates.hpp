#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cbloch/paths.hpp"
#include "cbloch/pulses.hpp"
#include "cbloch/types.hpp"

namespace cbloch {

// rotation by 2*alpha about the axis with polar angles (theta, phi)
struct GateSpec {
  double theta = 0, phi = 0, alpha = 0;
  Matrix2c matrix;
};

GateSpec build_gate(double theta, double phi, double alpha);

// F = |Tr(V U^dag)| / |Tr(V V^dag)|; the denominator normalizes non-unitary V
double gate_fidelity(const Matrix2c& v, const Matrix2c& u);

// constant azimuthal offset dphi1 + i dphi2 applied to the drive phases
struct DeviationSpec {
  double dphi1 = 0, dphi2 = 0;
  double guard = pi / 4;  // magnitude cap for the small-deviation regime
};

// the gate actually implemented under the offset: V = cos(alpha) I
// - i sin(alpha) (n'.sigma) with the axis azimuth at phi + (dphi1 + i dphi2);
// a complex offset tilts the axis off the real sphere and V goes non-unitary
Matrix2c deviated_gate(double theta, double phi, double alpha, const DeviationSpec& dev);

// per-sample comparison of a drive against its deviated counterpart; phase
// shifts are principal-valued and flagged undefined where an amplitude is
// too small to carry a phase
struct DriveComparison {
  std::vector<double> times;
  std::vector<double> detuning_gap, decay_gap, rabi1_gap, rabi2_gap;
  std::vector<double> phase1_shift, phase2_shift;
  std::vector<bool> phase1_defined, phase2_defined;

  double max_detuning_gap() const;
  double max_rabi_gap() const;
};

struct DeviationOutcome {
  ComplexAnglePath shifted_path;
  PhysicalDrive original, shifted;
  DriveComparison comparison;
};

DeviationOutcome apply_polar_deviation(const ComplexAnglePath& path, const DeviationSpec& dev,
                                       int n_samples = 257);

// per-sample |O1 O2 cos(p1 - p2) - O1' O2' cos(p1' - p2')|; the product is
// conserved under any constant complex azimuthal offset
std::vector<double> deviation_invariant(const PhysicalDrive& a, const PhysicalDrive& b);

struct RobustnessPoint {
  DeviationSpec deviation;
  double f_exact = 0;            // gate_fidelity of the deviated gate
  double f_quadratic_approx = 0; // 1 - sin^2(alpha) sin^2(theta) dphi1^2 / 2
  double f_dynamical_ref = 0;    // 1 - sin^2(theta0_ref) dphi1^2 / 2
  double f_holonomic_ref = 0;    // 1 - sin^2(alpha) dphi1^2 / 2
  double theta0_ref = 0;
};

std::vector<RobustnessPoint> robustness_sweep(double theta, double phi, double alpha,
                                              const std::vector<double>& dphi1_grid,
                                              double theta0_ref);

// columns dphi1, dphi2, f_exact, f_quadratic_approx, f_dynamical_ref, f_holonomic_ref
void write_sweep_csv(const std::vector<RobustnessPoint>& points, std::ostream& out);

// name of the nearest catalog gate ({1, -1, i, -i} x {I, X, Y, Z}) by plain
// Frobenius distance, or "" when none is within tol; deliberately sensitive
// to global phase so reports distinguish iX from -iX
std::string recognize_gate(const Matrix2c& u, double tol = 1e-6);

// the catalog matrix for a recognize_gate name; throws on unknown names
Matrix2c named_gate(const std::string& name);

}  // namespace cbloch
