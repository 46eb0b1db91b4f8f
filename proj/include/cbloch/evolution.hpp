#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cbloch/paths.hpp"
#include "cbloch/types.hpp"

namespace cbloch {

struct IntegratorConfig {
  int steps = 10000;             // total across the whole run
  std::string scheme = "rk4-fixed";
  int checkpoint_stride = 100;   // record every this many steps
};

// time-dependent generator; must be defined on the whole integration span
using HamiltonianFn = std::function<MatrixXc(double t)>;

// generator with an explicit interval index, for piecewise-continuous drives;
// the index is the position in the breakpoint partition
using PiecewiseHamiltonianFn = std::function<MatrixXc(double t, std::size_t interval)>;

struct EvolutionRecord {
  std::vector<double> times;          // checkpoint times, first = t0, last = tf
  std::vector<MatrixXc> operators;    // U(t, t0) at each checkpoint
  std::vector<MatrixXc> left_operators;  // W(t, t0) evolved under H^dagger
  std::vector<double> unitarity_residual;  // |U^dag U - I| per checkpoint
  std::vector<double> biortho_residual;    // |W^dag U - I| per checkpoint
  int steps_taken = 0;
  int scheme_order = 4;

  const MatrixXc& final_operator() const { return operators.back(); }
  double max_intermediate_unitarity_residual() const;
};

// integrates i dU/dt = H U (and the adjoint companion) with the classical
// fixed-step 4th-order scheme
EvolutionRecord evolve_operator(const HamiltonianFn& h, int dim, double t0, double tf,
                                const IntegratorConfig& cfg = {});

// same, but steps never straddle a breakpoint: the run is split at the given
// interior times with steps allocated per subinterval proportionally to its
// duration (rounded up), and h receives the subinterval index
EvolutionRecord evolve_operator_piecewise(const PiecewiseHamiltonianFn& h, int dim,
                                          double t0, double tf,
                                          const std::vector<double>& breakpoints,
                                          const IntegratorConfig& cfg = {});

struct StatePairTrajectory {
  std::vector<double> times;
  std::vector<VectorXc> psi;        // driven by H
  std::vector<VectorXc> psi_tilde;  // driven by H^dagger
};

// evolves |psi> under H and |psi_tilde> under H^dagger on a shared grid
StatePairTrajectory evolve_state_pair(const HamiltonianFn& h, const VectorXc& psi0,
                                      const VectorXc& psitilde0, double t0, double tf,
                                      const IntegratorConfig& cfg = {});

// drives the two-level system along a path: the Hamiltonian comes from the
// pulse formulas evaluated segment-exactly, with steps aligned to junctions
EvolutionRecord evolve_path(const ComplexAnglePath& path, const IntegratorConfig& cfg = {});

// max_mn |<psitilde_m|psi_n> - delta_mn| over a set of evolved pairs at one
// checkpoint index
double pair_biortho_residual(const std::vector<StatePairTrajectory>& pairs,
                             std::size_t checkpoint);

// checkpoint dump: t, the re/im interleaved row-major entries of U, and the
// unitarity residual
void write_checkpoint_csv(const EvolutionRecord& record, std::ostream& out);

}  // namespace cbloch
