#include "cbloch/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cbloch/errors.hpp"
#include "cbloch/linalg.hpp"
#include "cbloch/pulses.hpp"

namespace cbloch {

namespace {

void check_config(int dim, double t0, double tf, const IntegratorConfig& cfg) {
  if (dim < 1) throw ValidationError("evolve: dimension must be positive");
  if (!(tf > t0)) throw ValidationError("evolve: need tf > t0");
  if (cfg.steps < 10) throw ValidationError("evolve: need at least 10 steps");
  if (cfg.scheme != "rk4-fixed")
    throw ValidationError("evolve: unknown scheme '" + cfg.scheme + "'");
  if (cfg.checkpoint_stride < 1)
    throw ValidationError("evolve: checkpoint stride must be positive");
}

struct Subinterval {
  double a, b;
  std::size_t index;
  int steps;
};

std::vector<Subinterval> partition(double t0, double tf, const std::vector<double>& breakpoints,
                                   int total_steps) {
  const double span = tf - t0;
  std::vector<double> cuts = {t0};
  for (double b : breakpoints) {
    if (b > t0 + 1e-12 * span && b < tf - 1e-12 * span) cuts.push_back(b);
  }
  cuts.push_back(tf);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [span](double a, double b) { return std::abs(a - b) <= 1e-12 * span; }),
             cuts.end());

  std::vector<Subinterval> subs;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double frac = (cuts[k + 1] - cuts[k]) / span;
    const int steps = std::max(1, static_cast<int>(std::ceil(total_steps * frac)));
    subs.push_back({cuts[k], cuts[k + 1], k, steps});
  }
  return subs;
}

MatrixXc sample_h(const PiecewiseHamiltonianFn& h, double t, std::size_t index, int dim) {
  MatrixXc m = h(t, index);
  if (m.rows() != dim || m.cols() != dim)
    throw ValidationError("evolve: Hamiltonian has the wrong dimension");
  if (!all_finite(m)) throw NumericalError("evolve: non-finite Hamiltonian sample");
  return m;
}

// one classical 4th-order step of dU/dt = -i M(t) U, with M fixed to the
// current subinterval so junction-time samples use the left-side drive
void rk4_step(const PiecewiseHamiltonianFn& h, std::size_t index, int dim, double ta,
              double tb, MatrixXc& u, MatrixXc& w) {
  const double dt = tb - ta;
  const double tm = 0.5 * (ta + tb);
  const MatrixXc ha = sample_h(h, ta, index, dim);
  const MatrixXc hm = sample_h(h, tm, index, dim);
  const MatrixXc hb = sample_h(h, tb, index, dim);

  const MatrixXc k1 = -im * (ha * u);
  const MatrixXc k2 = -im * (hm * (u + 0.5 * dt * k1));
  const MatrixXc k3 = -im * (hm * (u + 0.5 * dt * k2));
  const MatrixXc k4 = -im * (hb * (u + dt * k3));
  u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  const MatrixXc had = ha.adjoint();
  const MatrixXc hmd = hm.adjoint();
  const MatrixXc hbd = hb.adjoint();
  const MatrixXc l1 = -im * (had * w);
  const MatrixXc l2 = -im * (hmd * (w + 0.5 * dt * l1));
  const MatrixXc l3 = -im * (hmd * (w + 0.5 * dt * l2));
  const MatrixXc l4 = -im * (hbd * (w + dt * l3));
  w += (dt / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
}

}  // namespace

double EvolutionRecord::max_intermediate_unitarity_residual() const {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < unitarity_residual.size(); ++k)
    worst = std::max(worst, unitarity_residual[k]);
  return worst;
}

EvolutionRecord evolve_operator_piecewise(const PiecewiseHamiltonianFn& h, int dim, double t0,
                                          double tf, const std::vector<double>& breakpoints,
                                          const IntegratorConfig& cfg) {
  check_config(dim, t0, tf, cfg);
  const auto subs = partition(t0, tf, breakpoints, cfg.steps);

  MatrixXc u = MatrixXc::Identity(dim, dim);
  MatrixXc w = MatrixXc::Identity(dim, dim);
  const MatrixXc id = MatrixXc::Identity(dim, dim);

  EvolutionRecord rec;
  auto checkpoint = [&](double t) {
    rec.times.push_back(t);
    rec.operators.push_back(u);
    rec.left_operators.push_back(w);
    rec.unitarity_residual.push_back((u.adjoint() * u - id).norm());
    rec.biortho_residual.push_back((w.adjoint() * u - id).norm());
  };
  checkpoint(t0);

  int global_step = 0;
  for (const auto& sub : subs) {
    for (int i = 0; i < sub.steps; ++i) {
      const double ta = sub.a + (sub.b - sub.a) * i / sub.steps;
      const double tb = (i + 1 == sub.steps) ? sub.b : sub.a + (sub.b - sub.a) * (i + 1) / sub.steps;
      rk4_step(h, sub.index, dim, ta, tb, u, w);
      if (u.norm() > 1e12 || w.norm() > 1e12)
        throw NumericalError("evolve: operator norm exceeded 1e12 (runaway growth)");
      ++global_step;
      const bool last = (&sub == &subs.back()) && (i + 1 == sub.steps);
      if (global_step % cfg.checkpoint_stride == 0 || last) checkpoint(tb);
    }
  }
  rec.steps_taken = global_step;
  return rec;
}

EvolutionRecord evolve_operator(const HamiltonianFn& h, int dim, double t0, double tf,
                                const IntegratorConfig& cfg) {
  return evolve_operator_piecewise([&h](double t, std::size_t) { return h(t); }, dim, t0, tf,
                                   {}, cfg);
}

StatePairTrajectory evolve_state_pair(const HamiltonianFn& h, const VectorXc& psi0,
                                      const VectorXc& psitilde0, double t0, double tf,
                                      const IntegratorConfig& cfg) {
  if (psi0.size() != psitilde0.size())
    throw ValidationError("evolve_state_pair: state dimensions differ");
  const auto rec = evolve_operator(h, static_cast<int>(psi0.size()), t0, tf, cfg);
  StatePairTrajectory traj;
  traj.times = rec.times;
  traj.psi.reserve(rec.operators.size());
  traj.psi_tilde.reserve(rec.operators.size());
  for (std::size_t k = 0; k < rec.operators.size(); ++k) {
    traj.psi.push_back(rec.operators[k] * psi0);
    traj.psi_tilde.push_back(rec.left_operators[k] * psitilde0);
  }
  return traj;
}

EvolutionRecord evolve_path(const ComplexAnglePath& path, const IntegratorConfig& cfg) {
  const auto& segments = path.segments();
  auto h = [&segments](double t, std::size_t index) -> MatrixXc {
    const PulsePoint p = pulses_at(segments[index].eval(t));
    return pauli_combine(p.omega_x, p.omega_y, p.omega_z);
  };
  return evolve_operator_piecewise(h, 2, path.t0(), path.tf(), path.junctions(), cfg);
}

double pair_biortho_residual(const std::vector<StatePairTrajectory>& pairs,
                             std::size_t checkpoint) {
  double worst = 0.0;
  for (std::size_t m = 0; m < pairs.size(); ++m) {
    for (std::size_t n = 0; n < pairs.size(); ++n) {
      if (checkpoint >= pairs[m].psi_tilde.size() || checkpoint >= pairs[n].psi.size())
        throw ValidationError("pair_biortho_residual: checkpoint out of range");
      const Complex overlap = pairs[m].psi_tilde[checkpoint].dot(pairs[n].psi[checkpoint]);
      const double target = m == n ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(overlap - target));
    }
  }
  return worst;
}

void write_checkpoint_csv(const EvolutionRecord& record, std::ostream& out) {
  if (record.operators.empty()) {
    out << "t,unitarity_residual\n";
    return;
  }
  const auto dim = record.operators.front().rows();
  out << 't';
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      out << ",u" << r << c << "_re,u" << r << c << "_im";
  out << ",unitarity_residual\n";
  char buf[64];
  for (std::size_t k = 0; k < record.times.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", record.times[k]);
    out << buf;
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        const Complex z = record.operators[k](r, c);
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", z.real(), z.imag());
        out << buf;
      }
    }
    std::snprintf(buf, sizeof(buf), ",%.17g\n", record.unitarity_residual[k]);
    out << buf;
  }
}

}  // namespace cbloch
