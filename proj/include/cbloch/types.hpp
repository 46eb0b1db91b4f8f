#pragma once

#include <complex>
#include <Eigen/Dense>

namespace cbloch {

using Complex = std::complex<double>;

using Matrix2c = Eigen::Matrix2cd;
using Matrix3c = Eigen::Matrix3cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix9c = Eigen::Matrix<Complex, 9, 9>;
using MatrixXc = Eigen::MatrixXcd;
using Vector2c = Eigen::Vector2cd;
using VectorXc = Eigen::VectorXcd;
using Vector3d = Eigen::Vector3d;
using VectorXd = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex im{0.0, 1.0};

inline Matrix2c sigma_x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2c sigma_y() {
  Matrix2c m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix2c sigma_z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}

// true iff every entry has finite real and imaginary part
template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex v = m(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  return true;
}

}  // namespace cbloch
