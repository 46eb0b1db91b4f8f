#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cbloch/errors.hpp"
#include "cbloch/linalg.hpp"
#include "cbloch/types.hpp"

using namespace cbloch;

namespace {

Matrix2c taylor_exponential(const Matrix2c& m, int terms) {
  Matrix2c sum = Matrix2c::Identity();
  Matrix2c term = Matrix2c::Identity();
  for (int k = 1; k <= terms; ++k) {
    term = (term * m / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

Matrix2c random_matrix(std::mt19937_64& rng, double max_norm) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix2c m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = Complex(u(rng), u(rng));
  const double n = m.norm();
  if (n > max_norm) m *= max_norm / n;
  return m;
}

Complex random_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

Vector3d random_axis(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector3d v;
  do {
    v << u(rng), u(rng), u(rng);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

}  // namespace

TEST_CASE("pauli_combine on basis coefficients") {
  CHECK(pauli_combine(0, 0, 0).norm() == 0.0);

  Matrix2c x;
  x << 0, 1, 1, 0;
  CHECK((pauli_combine(2, 0, 0) - x).norm() <= 1e-15);

  const Complex cz{1.0, -0.4};
  Matrix2c expected;
  expected << 0.5 * cz, 0, 0, -0.5 * cz;
  CHECK((pauli_combine(0, 0, cz) - expected).norm() <= 1e-15);
}

TEST_CASE("pauli_combine is linear in each argument") {
  std::mt19937_64 rng(20240901);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex a = random_complex(rng), b = random_complex(rng);
    const Complex cx = random_complex(rng), cy = random_complex(rng), cz = random_complex(rng);
    const Complex dx = random_complex(rng), dy = random_complex(rng), dz = random_complex(rng);
    const Matrix2c lhs = pauli_combine(a * cx + b * dx, a * cy + b * dy, a * cz + b * dz);
    const Matrix2c rhs = a * pauli_combine(cx, cy, cz) + b * pauli_combine(dx, dy, dz);
    CHECK((lhs - rhs).norm() <= 1e-13);
  }
}

TEST_CASE("su2_exponential reproduces closed-form rotations") {
  CHECK((su2_exponential(0.0, Vector3d(0, 0, 1)) - Matrix2c::Identity()).norm() <= 1e-15);

  Matrix2c ix;
  ix << 0, im, im, 0;
  CHECK((su2_exponential(pi / 2, Vector3d(-1, 0, 0)) - ix).norm() <= 1e-15);
  CHECK((su2_exponential(pi / 2, Vector3d(1, 0, 0)) + ix).norm() <= 1e-15);

  CHECK_THROWS_AS(su2_exponential(1.0, Vector3d(1, 1, 0)), ValidationError);
}

TEST_CASE("su2_exponential composes along a fixed axis and has unit determinant") {
  std::mt19937_64 rng(20240902);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int trial = 0; trial < 40; ++trial) {
    const Vector3d n = random_axis(rng);
    const double alpha = ang(rng), beta = ang(rng);
    const Matrix2c prod = su2_exponential(alpha, n) * su2_exponential(beta, n);
    CHECK((prod - su2_exponential(alpha + beta, n)).norm() <= 1e-12);
    CHECK(std::abs(su2_exponential(alpha, n).determinant() - 1.0) <= 1e-12);
  }
}

TEST_CASE("general_exponential handles closed-form inputs") {
  CHECK((general_exponential(MatrixXc::Zero(3, 3)) - MatrixXc::Identity(3, 3)).norm() <= 1e-14);

  MatrixXc d = MatrixXc::Zero(2, 2);
  d(0, 0) = Complex(0.3, -1.1);
  d(1, 1) = Complex(-0.7, 0.2);
  MatrixXc expected = MatrixXc::Zero(2, 2);
  expected(0, 0) = std::exp(d(0, 0));
  expected(1, 1) = std::exp(d(1, 1));
  CHECK((general_exponential(d) - expected).norm() <= 1e-13);

  CHECK_THROWS_AS(general_exponential(MatrixXc::Zero(2, 3)), ValidationError);
}

TEST_CASE("general_exponential matches a truncated series on small random inputs") {
  std::mt19937_64 rng(20240903);
  for (int trial = 0; trial < 60; ++trial) {
    const Matrix2c m = random_matrix(rng, 1.0);
    const Matrix2c series = taylor_exponential(m, 30);
    CHECK((general_exponential(m) - series).norm() <= 1e-12);
  }
}

TEST_CASE("general_exponential agrees with su2_exponential on su(2) generators") {
  std::mt19937_64 rng(20240904);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int trial = 0; trial < 40; ++trial) {
    const Vector3d n = random_axis(rng);
    const double alpha = ang(rng);
    const Matrix2c gen =
        -im * alpha * pauli_combine(2.0 * n.x(), 2.0 * n.y(), 2.0 * n.z());
    CHECK((general_exponential(gen) - su2_exponential(alpha, n)).norm() <= 1e-10);
  }
}

TEST_CASE("gate_distance ignores global phase") {
  const MatrixXc id = MatrixXc::Identity(2, 2);
  CHECK(gate_distance(id, id) == 0.0);
  CHECK(gate_distance(id, std::polar(1.0, 0.3) * id) <= 1e-15);

  MatrixXc ix(2, 2);
  ix << 0, im, im, 0;
  CHECK(gate_distance(id, ix) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(gate_distance(id, MatrixXc::Identity(3, 3)), ValidationError);
}

TEST_CASE("gate_distance lower-bounds the plain Frobenius distance") {
  std::mt19937_64 rng(20240905);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix2c a = random_matrix(rng, 2.0);
    const Matrix2c b = random_matrix(rng, 2.0);
    const double d = gate_distance(a, b);
    CHECK(d <= (a - b).norm() + 1e-13);
    const double lam = ang(rng);
    CHECK(gate_distance(a, std::polar(1.0, lam) * a) <= 1e-12);
  }
}
