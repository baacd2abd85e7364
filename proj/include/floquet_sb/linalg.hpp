#pragma once

#include <complex>

#include <Eigen/Dense>

namespace floquet_sb {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr cplx kI{0.0, 1.0};

namespace pauli {
Mat2 identity();
Mat2 x();
Mat2 y();
Mat2 z();
}  // namespace pauli

CMat kron(const CMat& a, const CMat& b);

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const CMat& a);

struct HermitianEigen {
  RVec values;   // ascending
  CMat vectors;  // columns
};

HermitianEigen hermitian_eigen(const CMat& h);

/// exp(factor * H) for Hermitian H, through its eigendecomposition.
CMat expm_hermitian(const CMat& h, cplx factor);
CMat expm_hermitian(const HermitianEigen& eig, cplx factor);

/// Largest singular value.
double operator_norm(const CMat& a);

}  // namespace floquet_sb
