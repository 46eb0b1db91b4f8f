#pragma once

#include "cbloch/types.hpp"

namespace cbloch {

// 1/2 (cx sigma_x + cy sigma_y + cz sigma_z)
Matrix2c pauli_combine(Complex cx, Complex cy, Complex cz);

// exp(-i alpha n.sigma) for a real unit axis n; unitary with det 1
Matrix2c su2_exponential(double alpha, const Vector3d& axis);

// matrix exponential of an arbitrary square complex matrix
MatrixXc general_exponential(const MatrixXc& m);

// Frobenius distance between a and e^{i lambda} b, minimized over the
// global phase lambda; zero iff a and b agree up to global phase
double gate_distance(const MatrixXc& a, const MatrixXc& b);

}  // namespace cbloch
