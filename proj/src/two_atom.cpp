#include "cbloch/two_atom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbloch/errors.hpp"
#include "cbloch/pulses.hpp"

namespace cbloch {

namespace {

constexpr int kRr = 8;  // pair index of |rr>

void check_config(const TwoAtomConfig& cfg) {
  if (!(cfg.u > 0.0)) throw ValidationError("two-atom config: u must be positive");
  if (!(cfg.big_theta >= 0.0))
    throw ValidationError("two-atom config: target phase must be nonnegative");
  if (cfg.abstract_gates && cfg.mode == TwoAtomMode::full)
    throw ValidationError(
        "two-atom config: abstract gates are instantaneous, so u cannot act during them; "
        "use idealized mode");
}

// 3x3 single-atom drive: the full two-level Hamiltonian rebuilt from the
// physical parameters on the {e, r} block, zero g row/column
Matrix3c single_atom_drive(const PhysicalPoint& p) {
  const Complex phasor1 = std::exp(im * p.phase1);
  const Complex phasor2 = std::exp(im * p.phase2);
  const Complex half_z = 0.5 * Complex(p.detuning, -p.decay_diff);
  Matrix3c d = Matrix3c::Zero();
  d(ThreeLevelBasis::e, ThreeLevelBasis::r) =
      0.5 * (p.rabi1 * std::conj(phasor1) + im * p.rabi2 * std::conj(phasor2));
  d(ThreeLevelBasis::r, ThreeLevelBasis::e) =
      0.5 * (p.rabi1 * phasor1 + im * p.rabi2 * phasor2);
  d(ThreeLevelBasis::e, ThreeLevelBasis::e) = half_z;
  d(ThreeLevelBasis::r, ThreeLevelBasis::r) = -half_z;
  return d;
}

// d acting on atom 1 plus d acting on atom 2
Matrix9c embed_both(const Matrix3c& d) {
  Matrix9c h = Matrix9c::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Complex v = d(a, b);
      for (int c = 0; c < 3; ++c) {
        h(3 * a + c, 3 * b + c) += v;
        h(3 * c + a, 3 * c + b) += v;
      }
    }
  return h;
}

Matrix9c drive_at(const ComplexAnglePath& path, double local_t) {
  return embed_both(single_atom_drive(physical_at(pulses_at(sample(path, local_t)))));
}

// m on atom 1 tensor m on atom 2
Matrix9c kron_pair(const Matrix3c& m) {
  Matrix9c out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) out(3 * a + c, 3 * b + d) = m(a, b) * m(c, d);
  return out;
}

// factor * X on the {e, r} block, identity on g
Matrix3c abstract_block(Complex factor) {
  Matrix3c m = Matrix3c::Zero();
  m(ThreeLevelBasis::g, ThreeLevelBasis::g) = 1;
  m(ThreeLevelBasis::e, ThreeLevelBasis::r) = factor;
  m(ThreeLevelBasis::r, ThreeLevelBasis::e) = factor;
  return m;
}

Matrix9c integrate_pulse(const ComplexAnglePath& path, double u_shift,
                         const IntegratorConfig& cfg) {
  const auto& segs = path.segments();
  auto h = [&segs, u_shift](double t, std::size_t interval) -> MatrixXc {
    Matrix9c m = embed_both(single_atom_drive(physical_at(pulses_at(segs[interval].eval(t)))));
    if (u_shift != 0.0) m(kRr, kRr) += u_shift;
    return m;
  };
  return evolve_operator_piecewise(h, 9, path.t0(), path.tf(), path.junctions(), cfg)
      .final_operator();
}

Matrix9c integrate_wait(double u, double dt, const IntegratorConfig& cfg) {
  auto h = [u](double) -> MatrixXc {
    Matrix9c m = Matrix9c::Zero();
    m(kRr, kRr) = u;
    return m;
  };
  return evolve_operator(h, 9, 0.0, dt, cfg).final_operator();
}

// smallest quadrature magnitude over a densely sampled pulse
double quadrature_floor(const ComplexAnglePath& path) {
  const PhysicalDrive drive = extract_physical(synthesize_pulses(path, 513));
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < drive.times.size(); ++k)
    lo = std::min(lo, std::hypot(drive.rabi1[k], drive.rabi2[k]));
  return lo;
}

int proportional_steps(int total, double duration, double whole) {
  const int share = static_cast<int>(std::ceil(total * duration / whole));
  return std::max(10, share);
}

}  // namespace

int ThreeLevelBasis::pair_index(int first, int second) {
  if (first < 0 || first >= dim || second < 0 || second >= dim)
    throw ValidationError("pair_index: level outside the g, e, r ladder");
  return 3 * first + second;
}

const std::array<int, 4>& ThreeLevelBasis::computational() {
  static const std::array<int, 4> indices = {0, 1, 3, 4};  // gg, ge, eg, ee
  return indices;
}

std::string ThreeLevelBasis::label(int pair) {
  if (pair < 0 || pair >= pair_dim)
    throw ValidationError("label: pair index outside 0..8");
  const char names[3] = {'g', 'e', 'r'};
  return std::string{names[pair / 3], names[pair % 3]};
}

TwoAtomConfig default_cz_config(double u, double big_theta, TwoAtomMode mode) {
  return TwoAtomConfig{
      u,
      big_theta,
      mode,
      false,
      make_path("mlm", {{"theta0", pi / 2}, {"theta1", pi / 3}, {"phi0", pi}}),
      make_path("mlm", {{"theta0", pi / 2}, {"theta1", pi / 3}, {"phi0", 0.0}}),
  };
}

CzSchedule cz_schedule(const TwoAtomConfig& cfg) {
  check_config(cfg);
  CzSchedule s;
  s.t1 = cfg.pulse_up.duration();
  s.t2 = s.t1 + cfg.big_theta / cfg.u;
  s.t_total = s.t2 + cfg.pulse_down.duration();
  return s;
}

Matrix9c build_two_atom_h(const TwoAtomConfig& cfg, double t) {
  const CzSchedule s = cz_schedule(cfg);
  const double slack = 1e-9 * s.t_total;
  if (t < -slack || t > s.t_total + slack)
    throw ValidationError("build_two_atom_h: time outside the protocol schedule");

  Matrix9c h;
  bool shift_on;
  if (t < s.t1) {
    h = drive_at(cfg.pulse_up, cfg.pulse_up.t0() + t);
    shift_on = cfg.mode == TwoAtomMode::full;
  } else if (t < s.t2) {
    h = Matrix9c::Zero();
    shift_on = true;
  } else {
    h = drive_at(cfg.pulse_down, cfg.pulse_down.t0() + (t - s.t2));
    shift_on = cfg.mode == TwoAtomMode::full;
  }
  if (shift_on) h(kRr, kRr) += cfg.u;
  return h;
}

SubspaceDecomposition subspace_extract(const Matrix9c& u9) {
  const auto& comp = ThreeLevelBasis::computational();
  std::array<bool, 9> inside{};
  for (int idx : comp) inside[static_cast<std::size_t>(idx)] = true;

  SubspaceDecomposition out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block(i, j) = u9(comp[i], comp[j]);

  double escaped = 0, entered = 0;
  for (int row = 0; row < 9; ++row)
    for (int col = 0; col < 9; ++col) {
      const double w = std::norm(u9(row, col));
      if (!inside[row] && inside[col]) escaped += w;
      if (inside[row] && !inside[col]) entered += w;
    }
  out.leakage = std::sqrt(escaped) + std::sqrt(entered);
  return out;
}

CzOutcome run_cz_protocol(const TwoAtomConfig& cfg, const IntegratorConfig& integrator) {
  const CzSchedule sched = cz_schedule(cfg);
  const double dt_wait = sched.t2 - sched.t1;

  CzOutcome out;
  if (cfg.abstract_gates) {
    out.step1 = kron_pair(abstract_block(im));
    out.step3 = kron_pair(abstract_block(-im));
    out.wait = Matrix9c::Identity();
    out.wait(kRr, kRr) = std::exp(-im * cfg.u * dt_wait);
  } else {
    if (integrator.steps < 10) throw ValidationError("run_cz_protocol: need at least 10 steps");
    require_closed(cfg.pulse_up);
    require_closed(cfg.pulse_down);
    const double u_pulse = cfg.mode == TwoAtomMode::full ? cfg.u : 0.0;
    IntegratorConfig step_cfg = integrator;
    step_cfg.steps = proportional_steps(integrator.steps, sched.t1, sched.t_total);
    out.step1 = integrate_pulse(cfg.pulse_up, u_pulse, step_cfg);
    step_cfg.steps =
        proportional_steps(integrator.steps, sched.t_total - sched.t2, sched.t_total);
    out.step3 = integrate_pulse(cfg.pulse_down, u_pulse, step_cfg);
    if (dt_wait > 0.0) {
      step_cfg.steps = proportional_steps(integrator.steps, dt_wait, sched.t_total);
      out.wait = integrate_wait(cfg.u, dt_wait, step_cfg);
    } else {
      out.wait = Matrix9c::Identity();
    }
  }
  out.full = out.step3 * out.wait * out.step1;

  const SubspaceDecomposition dec = subspace_extract(out.full);
  out.subspace = dec.block;

  CzReport& rep = out.report;
  rep.theta_target = cfg.big_theta;
  rep.theta_effective = std::arg(out.subspace(3, 3));
  rep.leakage = dec.leakage;
  rep.mode = cfg.mode;
  rep.abstract_gates = cfg.abstract_gates;
  rep.breakdown = dec.leakage > 0.1;

  const auto& comp = ThreeLevelBasis::computational();
  for (int k = 0; k < 4; ++k) {
    rep.diagonal_phase[static_cast<std::size_t>(k)] = std::arg(out.subspace(k, k));
    const Eigen::Matrix<Complex, 9, 1> column = out.full.col(comp[k]);
    const double norm = column.norm();
    rep.basis_fidelity[static_cast<std::size_t>(k)] =
        norm < 1e-30 ? 0.0 : std::abs(column(comp[k])) / norm;
    double on_r = 0;
    for (int j = 0; j < 9; ++j)
      if (j / 3 == ThreeLevelBasis::r || j % 3 == ThreeLevelBasis::r)
        on_r += std::norm(column(j));
    rep.r_population[static_cast<std::size_t>(k)] =
        norm < 1e-30 ? 0.0 : on_r / (norm * norm);
  }

  if (!cfg.abstract_gates) {
    const double floor_rabi =
        std::min(quadrature_floor(cfg.pulse_up), quadrature_floor(cfg.pulse_down));
    rep.u_over_omega = cfg.u / floor_rabi;  // infinite when the drive touches zero
    rep.ratio_warning = cfg.mode == TwoAtomMode::full && rep.u_over_omega > 0.1;
  }
  return out;
}

}  // namespace cbloch
