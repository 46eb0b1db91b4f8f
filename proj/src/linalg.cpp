#include "cbloch/linalg.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "cbloch/errors.hpp"

namespace cbloch {

Matrix2c pauli_combine(Complex cx, Complex cy, Complex cz) {
  Matrix2c m;
  m << cz, cx - im * cy, cx + im * cy, -cz;
  return 0.5 * m;
}

Matrix2c su2_exponential(double alpha, const Vector3d& axis) {
  if (std::abs(axis.norm() - 1.0) > 1e-12)
    throw ValidationError("su2_exponential: axis must be a unit vector");
  const Matrix2c n_sigma = pauli_combine(2.0 * axis.x(), 2.0 * axis.y(), 2.0 * axis.z());
  return std::cos(alpha) * Matrix2c::Identity() - im * std::sin(alpha) * n_sigma;
}

MatrixXc general_exponential(const MatrixXc& m) {
  if (m.rows() != m.cols()) throw ValidationError("general_exponential: matrix must be square");
  return m.exp();
}

double gate_distance(const MatrixXc& a, const MatrixXc& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("gate_distance: dimension mismatch");
  const Complex overlap = (b.adjoint() * a).trace();
  const double lambda = std::arg(overlap);
  return (a - std::polar(1.0, lambda) * b).norm();
}

}  // namespace cbloch
