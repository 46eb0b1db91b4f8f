#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "cbloch/paths.hpp"
#include "cbloch/types.hpp"

namespace cbloch {

// complex Pauli coefficients of the drive at one instant, plus the shared
// scalar f that all three components are built from
struct PulsePoint {
  Complex omega_x, omega_y, omega_z, f_tilde;
};

// coefficients from a single trajectory sample:
//   f = 2 Re(dphi sin^2(theta/2)) - dphi
//   Ox = f sin(theta) cos(phi) - dtheta sin(phi)
//   Oy = f sin(theta) sin(phi) + dtheta cos(phi)
//   Oz = f cos(theta) + dphi
PulsePoint pulses_at(const PathSample& s);

// drive sampled on a grid; the generating path is kept so consumers can
// re-evaluate exactly between grid points
struct PulseSet {
  std::vector<double> times;
  std::vector<Complex> omega_x, omega_y, omega_z, f_tilde;
  std::shared_ptr<const ComplexAnglePath> source;
};

// uniform n_samples grid over [t0, tf] with all segment junctions forced in;
// rejects paths that do not close in value
PulseSet synthesize_pulses(const ComplexAnglePath& path, int n_samples);

// real laboratory parameters: two Rabi envelopes with carrier phases, the
// detuning, and the half-difference of the two decay rates
struct PhysicalDrive {
  std::vector<double> times;
  std::vector<double> rabi1, rabi2, phase1, phase2, detuning, decay_diff;
};

// one instant of the physical drive
struct PhysicalPoint {
  double rabi1, rabi2, phase1, phase2, detuning, decay_diff;
};

// rabi1 e^{i phase1} = Re Ox + i Re Oy, rabi2 e^{i phase2} = Im Ox + i Im Oy,
// detuning = Re Oz, decay_diff = -Im Oz; phases are set to 0 when the
// corresponding rabi amplitude is below 1e-14
PhysicalPoint physical_at(const PulsePoint& p);

// physical_at applied across a sampled pulse set
PhysicalDrive extract_physical(const PulseSet& pulses);

// inverse of extract_physical (round-trip check and CSV re-import)
PulseSet drive_to_pulses(const PhysicalDrive& drive);

// (Ox sx + Oy sy + Oz sz) / 2; exact via the source path when attached,
// otherwise linear interpolation between grid samples
Matrix2c hamiltonian_at(const PulseSet& pulses, double t);

// columns t, rabi1, rabi2, phase1, phase2, detuning, decay_diff at full
// double precision
void write_drive_csv(const PhysicalDrive& drive, std::ostream& out);

}  // namespace cbloch
