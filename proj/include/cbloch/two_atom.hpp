#pragma once

#include <array>
#include <string>

#include "cbloch/evolution.hpp"
#include "cbloch/paths.hpp"
#include "cbloch/types.hpp"

namespace cbloch {

// single-atom levels ordered g, e, r; two-atom product states indexed
// 3 * first + second
struct ThreeLevelBasis {
  static constexpr int g = 0, e = 1, r = 2;
  static constexpr int dim = 3;
  static constexpr int pair_dim = 9;

  static int pair_index(int first, int second);
  // computational subspace gg, ge, eg, ee under the labels |0> = |g>, |1> = |e>
  static const std::array<int, 4>& computational();
  static std::string label(int pair);  // "gg" through "rr"
};

enum class TwoAtomMode { idealized, full };

// controlled-phase protocol parameters; the two paths generate the single-atom
// gate pulses applied to the {e, r} block of both atoms simultaneously
struct TwoAtomConfig {
  double u;                     // rr-pair energy shift, must be positive
  double big_theta;             // phase magnitude accumulated during the wait
  TwoAtomMode mode;             // whether u acts during the pulses
  bool abstract_gates;          // exact tensor gates instead of pulse integration
  ComplexAnglePath pulse_up;    // first step, an iX on each driven block
  ComplexAnglePath pulse_down;  // third step, the matching -iX
};

// standard setup: orange-slice pulses realizing iX and -iX
TwoAtomConfig default_cz_config(double u, double big_theta,
                                TwoAtomMode mode = TwoAtomMode::full);

// protocol clock: [0, t1) first pulse, [t1, t2) wait with the drives off,
// [t2, t_total] second pulse; t2 - t1 = big_theta / u
struct CzSchedule {
  double t1, t2, t_total;
};

CzSchedule cz_schedule(const TwoAtomConfig& cfg);

// 9-dim Hamiltonian at protocol time t: the u|rr><rr| shift (always on during
// the wait, on during the pulses only in full mode) plus the physical drive
// embedded on both atoms' {e, r} blocks; |g> stays uncoupled throughout
Matrix9c build_two_atom_h(const TwoAtomConfig& cfg, double t);

struct SubspaceDecomposition {
  Matrix4c block;  // rows/columns restricted to gg, ge, eg, ee
  double leakage;  // |complement<-subspace|_F + |subspace<-complement|_F
};

SubspaceDecomposition subspace_extract(const Matrix9c& u9);

struct CzReport {
  double theta_target = 0;
  double theta_effective = 0;  // arg of the ee diagonal of the subspace block
  double leakage = 0;
  std::array<double, 4> diagonal_phase{};  // arg of each subspace diagonal entry
  std::array<double, 4> basis_fidelity{};  // overlap with the ideal image, per basis input
  std::array<double, 4> r_population{};    // weight left on r-carrying levels, per input
  TwoAtomMode mode = TwoAtomMode::full;
  bool abstract_gates = false;
  double u_over_omega = 0;     // u / min_t sqrt(rabi1^2 + rabi2^2); 0 when abstract
  bool ratio_warning = false;  // full mode with u_over_omega above 0.1
  bool breakdown = false;      // leakage above 0.1
};

struct CzOutcome {
  Matrix9c step1, wait, step3;  // per-step propagators
  Matrix9c full;                // step3 * wait * step1
  Matrix4c subspace;
  CzReport report;
};

// three-step controlled-phase protocol: pulse both atoms, wait big_theta / u,
// pulse again; the total integrator step budget is split across the steps in
// proportion to their durations
CzOutcome run_cz_protocol(const TwoAtomConfig& cfg, const IntegratorConfig& integrator = {});

}  // namespace cbloch
