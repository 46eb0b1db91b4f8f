#include "cbloch/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cbloch/errors.hpp"
#include "cbloch/linalg.hpp"

namespace cbloch {

PulsePoint pulses_at(const PathSample& s) {
  const Complex half_sin = std::sin(0.5 * s.theta);
  const Complex sin2_half = half_sin * half_sin;
  const Complex f = 2.0 * (s.dphi * sin2_half).real() - s.dphi;

  const Complex sin_t = std::sin(s.theta);
  const Complex cos_t = std::cos(s.theta);
  const Complex sin_p = std::sin(s.phi);
  const Complex cos_p = std::cos(s.phi);

  PulsePoint p;
  p.f_tilde = f;
  p.omega_x = f * sin_t * cos_p - s.dtheta * sin_p;
  p.omega_y = f * sin_t * sin_p + s.dtheta * cos_p;
  p.omega_z = f * cos_t + s.dphi;
  return p;
}

PulseSet synthesize_pulses(const ComplexAnglePath& path, int n_samples) {
  if (n_samples < 2) throw ValidationError("synthesize_pulses: need at least 2 samples");
  require_closed(path);

  const double t0 = path.t0();
  const double tf = path.tf();
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n_samples) + path.segments().size());
  for (int i = 0; i < n_samples; ++i)
    grid.push_back(i + 1 == n_samples ? tf : t0 + (tf - t0) * i / (n_samples - 1));
  for (double tj : path.junctions()) grid.push_back(tj);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [span = tf - t0](double a, double b) {
                           return std::abs(a - b) <= 1e-12 * span;
                         }),
             grid.end());

  PulseSet set;
  set.times = std::move(grid);
  set.source = std::make_shared<ComplexAnglePath>(path);
  set.omega_x.reserve(set.times.size());
  set.omega_y.reserve(set.times.size());
  set.omega_z.reserve(set.times.size());
  set.f_tilde.reserve(set.times.size());
  for (double t : set.times) {
    const PulsePoint p = pulses_at(sample(path, t));
    set.omega_x.push_back(p.omega_x);
    set.omega_y.push_back(p.omega_y);
    set.omega_z.push_back(p.omega_z);
    set.f_tilde.push_back(p.f_tilde);
  }
  return set;
}

PhysicalPoint physical_at(const PulsePoint& p) {
  const double re_x = p.omega_x.real(), re_y = p.omega_y.real();
  const double im_x = p.omega_x.imag(), im_y = p.omega_y.imag();
  PhysicalPoint q;
  q.rabi1 = std::hypot(re_x, re_y);
  q.rabi2 = std::hypot(im_x, im_y);
  q.phase1 = q.rabi1 < 1e-14 ? 0.0 : std::atan2(re_y, re_x);
  q.phase2 = q.rabi2 < 1e-14 ? 0.0 : std::atan2(im_y, im_x);
  q.detuning = p.omega_z.real();
  q.decay_diff = -p.omega_z.imag();
  return q;
}

PhysicalDrive extract_physical(const PulseSet& pulses) {
  PhysicalDrive d;
  d.times = pulses.times;
  const std::size_t n = pulses.times.size();
  d.rabi1.resize(n);
  d.rabi2.resize(n);
  d.phase1.resize(n);
  d.phase2.resize(n);
  d.detuning.resize(n);
  d.decay_diff.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const PhysicalPoint q = physical_at(
        PulsePoint{pulses.omega_x[k], pulses.omega_y[k], pulses.omega_z[k], pulses.f_tilde[k]});
    d.rabi1[k] = q.rabi1;
    d.rabi2[k] = q.rabi2;
    d.phase1[k] = q.phase1;
    d.phase2[k] = q.phase2;
    d.detuning[k] = q.detuning;
    d.decay_diff[k] = q.decay_diff;
  }
  return d;
}

PulseSet drive_to_pulses(const PhysicalDrive& drive) {
  PulseSet set;
  set.times = drive.times;
  const std::size_t n = drive.times.size();
  set.omega_x.resize(n);
  set.omega_y.resize(n);
  set.omega_z.resize(n);
  set.f_tilde.assign(n, Complex(0, 0));
  for (std::size_t k = 0; k < n; ++k) {
    set.omega_x[k] = Complex(drive.rabi1[k] * std::cos(drive.phase1[k]),
                             drive.rabi2[k] * std::cos(drive.phase2[k]));
    set.omega_y[k] = Complex(drive.rabi1[k] * std::sin(drive.phase1[k]),
                             drive.rabi2[k] * std::sin(drive.phase2[k]));
    set.omega_z[k] = Complex(drive.detuning[k], -drive.decay_diff[k]);
  }
  return set;
}

Matrix2c hamiltonian_at(const PulseSet& pulses, double t) {
  if (pulses.source) {
    const PulsePoint p = pulses_at(sample(*pulses.source, t));
    return pauli_combine(p.omega_x, p.omega_y, p.omega_z);
  }
  if (pulses.times.empty()) throw ValidationError("hamiltonian_at: empty pulse set");
  const double lo = pulses.times.front(), hi = pulses.times.back();
  const double slack = 1e-9 * (hi - lo);
  if (t < lo - slack || t > hi + slack)
    throw ValidationError("hamiltonian_at: time outside sampled range");
  auto it = std::upper_bound(pulses.times.begin(), pulses.times.end(), t);
  std::size_t j = static_cast<std::size_t>(it - pulses.times.begin());
  if (j == 0) j = 1;
  if (j == pulses.times.size()) j = pulses.times.size() - 1;
  const double ta = pulses.times[j - 1], tb = pulses.times[j];
  const double w = (t - ta) / (tb - ta);
  const Complex ox = (1 - w) * pulses.omega_x[j - 1] + w * pulses.omega_x[j];
  const Complex oy = (1 - w) * pulses.omega_y[j - 1] + w * pulses.omega_y[j];
  const Complex oz = (1 - w) * pulses.omega_z[j - 1] + w * pulses.omega_z[j];
  return pauli_combine(ox, oy, oz);
}

void write_drive_csv(const PhysicalDrive& drive, std::ostream& out) {
  out << "t,rabi1,rabi2,phase1,phase2,detuning,decay_diff\n";
  char buf[256];
  for (std::size_t k = 0; k < drive.times.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  drive.times[k], drive.rabi1[k], drive.rabi2[k], drive.phase1[k],
                  drive.phase2[k], drive.detuning[k], drive.decay_diff[k]);
    out << buf;
  }
}

}  // namespace cbloch
