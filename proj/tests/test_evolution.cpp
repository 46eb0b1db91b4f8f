#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cbloch/errors.hpp"
#include "cbloch/evolution.hpp"
#include "cbloch/frames.hpp"
#include "cbloch/linalg.hpp"
#include "cbloch/pulses.hpp"

using namespace cbloch;

namespace {

// independent phase accumulator: composite Simpson of dphi sin^2(theta/2)
// per segment, kept local so this file does not lean on the phase module
Complex loop_integral(const ComplexAnglePath& path, int panels) {
  Complex total = 0;
  for (const auto& seg : path.segments()) {
    auto f = [&seg](double t) {
      const Complex sn = std::sin(0.5 * seg.theta(t));
      return seg.dphi(t) * sn * sn;
    };
    const double h = (seg.t_end - seg.t_start) / (2 * panels);
    Complex acc = f(seg.t_start) + f(seg.t_end);
    for (int k = 1; k < 2 * panels; ++k)
      acc += f(seg.t_start + k * h) * (k % 2 ? 4.0 : 2.0);
    total += acc * h / 3.0;
  }
  return total;
}

Matrix2c random_nonhermitian(std::mt19937_64& rng, double max_norm) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix2c m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = Complex(u(rng), u(rng));
  if (m.norm() > max_norm) m *= max_norm / m.norm();
  return m;
}

}  // namespace

TEST_CASE("zero Hamiltonian leaves the operator and states untouched") {
  const auto rec = evolve_operator([](double) { return MatrixXc::Zero(2, 2); }, 2, 0, 1,
                                   {100, "rk4-fixed", 10});
  CHECK((rec.final_operator() - MatrixXc::Identity(2, 2)).norm() <= 1e-14);
  CHECK(rec.operators.front() == MatrixXc::Identity(2, 2));

  VectorXc psi0(2);
  psi0 << Complex(0.6, 0.1), Complex(0.0, 0.79);
  const auto traj = evolve_state_pair([](double) { return MatrixXc::Zero(2, 2); }, psi0, psi0,
                                      0, 1, {100, "rk4-fixed", 10});
  for (const auto& v : traj.psi) CHECK((v - psi0).norm() <= 1e-14);
  for (const auto& v : traj.psi_tilde) CHECK((v - psi0).norm() <= 1e-14);
}

TEST_CASE("constant diagonal Hamiltonian integrates to the exact phases") {
  const double omega = 1.3, T = 1.0;
  MatrixXc h = MatrixXc::Zero(2, 2);
  h(0, 0) = omega / 2;
  h(1, 1) = -omega / 2;
  const auto rec = evolve_operator([&h](double) { return h; }, 2, 0, T, {1000, "rk4-fixed", 100});
  MatrixXc expected = MatrixXc::Zero(2, 2);
  expected(0, 0) = std::exp(-im * omega * T / 2.0);
  expected(1, 1) = std::exp(im * omega * T / 2.0);
  CHECK((rec.final_operator() - expected).norm() <= 1e-10);
}

TEST_CASE("constant non-Hermitian Hamiltonians match the matrix exponential") {
  std::mt19937_64 rng(20240930);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix2c h = random_nonhermitian(rng, 2.0);
    const auto rec =
        evolve_operator([&h](double) { return MatrixXc(h); }, 2, 0, 1, {2000, "rk4-fixed", 500});
    const MatrixXc expected = general_exponential(-im * MatrixXc(h));
    CHECK((rec.final_operator() - expected).norm() <= 1e-9);
    // the left operator solves the adjoint equation
    const MatrixXc expected_left = general_exponential(-im * MatrixXc(h.adjoint()));
    CHECK((rec.left_operators.back() - expected_left).norm() <= 1e-9);
  }
}

TEST_CASE("halving the step size cuts the error by at least 12x") {
  const std::vector<ComplexAnglePath> paths = {
      make_path("circle", {{"theta0", pi / 3}}),
      make_path("mlm", {{"theta0", pi / 2}, {"theta1", pi / 3}}),
      make_path("complex-circle", {{"theta0", pi / 2}, {"beta", 0.1}, {"gamma", 0.05}}),
      make_path("complex-mlm",
                {{"theta0", pi / 2}, {"theta1", pi / 3}, {"beta", 0.1}, {"gamma", 0.07}}),
  };
  for (const auto& path : paths) {
    const MatrixXc proxy = evolve_path(path, {12800, "rk4-fixed", 12800}).final_operator();
    const double coarse =
        (evolve_path(path, {200, "rk4-fixed", 200}).final_operator() - proxy).norm();
    const double fine =
        (evolve_path(path, {400, "rk4-fixed", 400}).final_operator() - proxy).norm();
    INFO(path.id() << " coarse=" << coarse << " fine=" << fine);
    CHECK(coarse / fine >= 12.0);
  }
}

TEST_CASE("non-unitary dynamics turns unitary again at the endpoint") {
  const std::vector<ComplexAnglePath> paths = {
      make_path("complex-circle", {{"theta0", pi / 2}, {"beta", 0.1}, {"gamma", 0.05}}),
      make_path("complex-mlm",
                {{"theta0", pi / 2}, {"theta1", pi / 3}, {"beta", 0.1}, {"gamma", 0.07}}),
  };
  for (const auto& path : paths) {
    const auto rec = evolve_path(path, {10000, "rk4-fixed", 100});
    INFO(path.id());
    CHECK(rec.max_intermediate_unitarity_residual() >= 1e-3);
    CHECK(rec.unitarity_residual.back() <= 1e-7);
    CHECK(std::abs(rec.final_operator().determinant() - 1.0) <= 1e-7);
  }
}

TEST_CASE("endpoint operator equals the frame reconstruction") {
  const std::vector<ComplexAnglePath> paths = {
      make_path("mlm", {{"theta0", pi / 2}, {"phi0", pi}, {"theta1", pi / 3}}),
      make_path("complex-circle", {{"theta0", pi / 2}, {"beta", 0.1}, {"gamma", 0.05}}),
  };
  for (const auto& path : paths) {
    const double alpha_minus = loop_integral(path, 2048).real();
    const double alpha_plus = -alpha_minus;
    const auto frame = bloch_frame(path);
    const double t0 = path.t0();
    MatrixXc rebuilt = std::exp(im * alpha_plus) * frame.right(0, t0) *
                           frame.left(0, t0).adjoint() +
                       std::exp(im * alpha_minus) * frame.right(1, t0) *
                           frame.left(1, t0).adjoint();
    const auto rec = evolve_path(path, {10000, "rk4-fixed", 10000});
    INFO(path.id());
    CHECK((rec.final_operator() - rebuilt).norm() <= 1e-6);
  }
}

TEST_CASE("evolved state pairs keep their pairings") {
  const auto path = make_path("complex-circle", {{"theta0", pi / 2}, {"beta", 0.1},
                                                 {"gamma", 0.05}});
  const auto frame = bloch_frame(path);
  const auto set = synthesize_pulses(path, 3);
  auto h = [&set](double t) { return MatrixXc(hamiltonian_at(set, t)); };

  std::vector<StatePairTrajectory> pairs;
  for (int m = 0; m < 2; ++m)
    pairs.push_back(evolve_state_pair(h, frame.right(m, 0.0), frame.left(m, 0.0), 0, 1,
                                      {10000, "rk4-fixed", 100}));

  CHECK(pair_biortho_residual(pairs, 0) <= 1e-14);
  for (std::size_t k = 0; k < pairs[0].times.size(); ++k)
    CHECK(pair_biortho_residual(pairs, k) <= 1e-9);

  // overlaps stay put against a doubled-resolution rerun
  std::vector<StatePairTrajectory> finer;
  for (int m = 0; m < 2; ++m)
    finer.push_back(evolve_state_pair(h, frame.right(m, 0.0), frame.left(m, 0.0), 0, 1,
                                      {20000, "rk4-fixed", 200}));
  for (std::size_t k = 0; k < pairs[0].times.size(); ++k)
    CHECK(std::abs(pair_biortho_residual(pairs, k) - pair_biortho_residual(finer, k)) <= 1e-9);
}

TEST_CASE("pairing a state with a forward-evolved partner fails loudly") {
  // evolving both members under H (instead of H and H-dagger) must break
  // biorthonormality for a genuinely non-Hermitian drive
  const auto path = make_path("complex-circle", {{"theta0", pi / 2}, {"beta", 0.1},
                                                 {"gamma", 0.05}});
  const auto rec = evolve_path(path, {2000, "rk4-fixed", 200});
  double worst = 0.0;
  for (std::size_t k = 0; k < rec.operators.size(); ++k) {
    const MatrixXc gram = rec.operators[k].adjoint() * rec.operators[k];
    worst = std::max(worst, (gram - MatrixXc::Identity(2, 2)).norm());
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("junction-aligned stepping is no worse than naive stepping") {
  const auto path = make_path("mlm", {{"theta0", pi / 2}, {"theta1", pi / 3},
                                      {"f1", 0.29}, {"f2", 0.37}});
  const MatrixXc proxy = evolve_path(path, {20000, "rk4-fixed", 20000}).final_operator();

  const auto set = synthesize_pulses(path, 3);
  auto h = [&set](double t) { return MatrixXc(hamiltonian_at(set, t)); };
  const double naive =
      (evolve_operator(h, 2, 0, 1, {500, "rk4-fixed", 500}).final_operator() - proxy).norm();
  const double aligned = (evolve_path(path, {500, "rk4-fixed", 500}).final_operator() - proxy).norm();
  INFO("aligned=" << aligned << " naive=" << naive);
  CHECK(aligned <= naive);
  CHECK(aligned <= 1e-8);
}

TEST_CASE("integrator rejects bad configuration and runaway growth") {
  auto zero = [](double) { return MatrixXc::Zero(2, 2); };
  CHECK_THROWS_AS(evolve_operator(zero, 2, 0, 1, {5, "rk4-fixed", 1}), ValidationError);
  CHECK_THROWS_AS(evolve_operator(zero, 2, 0, 1, {100, "euler", 1}), ValidationError);
  CHECK_THROWS_AS(evolve_operator(zero, 2, 1, 1, {100, "rk4-fixed", 1}), ValidationError);
  CHECK_THROWS_AS(evolve_operator(zero, 0, 0, 1, {100, "rk4-fixed", 1}), ValidationError);

  auto nan_h = [](double) {
    MatrixXc m = MatrixXc::Zero(2, 2);
    m(0, 0) = std::nan("");
    return m;
  };
  CHECK_THROWS_AS(evolve_operator(nan_h, 2, 0, 1, {100, "rk4-fixed", 1}), NumericalError);

  // an anti-Hermitian drive with gain 50 blows past the norm guard within a unit time
  auto growing = [](double) { return MatrixXc(im * 50.0 * MatrixXc::Identity(2, 2)); };
  CHECK_THROWS_AS(evolve_operator(growing, 2, 0, 1, {100, "rk4-fixed", 1}), NumericalError);
}

TEST_CASE("checkpoint records and CSV dump") {
  const auto path = make_path("circle", {{"theta0", pi / 2}});
  const auto rec = evolve_path(path, {1000, "rk4-fixed", 100});
  CHECK(rec.steps_taken == 1000);
  CHECK(rec.times.size() == 11);
  CHECK(rec.times.front() == 0.0);
  CHECK(rec.times.back() == 1.0);

  std::ostringstream out;
  write_checkpoint_csv(rec, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "t,u00_re,u00_im,u01_re,u01_im,u10_re,u10_im,u11_re,u11_im,unitarity_residual");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == rec.times.size());
}
