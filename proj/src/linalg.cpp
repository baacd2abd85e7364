#include "floquet_sb/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace floquet_sb {

namespace pauli {
Mat2 identity() { return Mat2::Identity(); }
Mat2 x() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Mat2 y() {
  Mat2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}
Mat2 z() {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double hermiticity_defect(const CMat& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen hermitian_eigen(const CMat& h) {
  // Symmetrize first so round-off asymmetry cannot leak into the eigenvectors.
  const CMat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMat expm_hermitian(const HermitianEigen& eig, cplx factor) {
  CVec phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) phases(i) = std::exp(factor * eig.values(i));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

CMat expm_hermitian(const CMat& h, cplx factor) { return expm_hermitian(hermitian_eigen(h), factor); }

double operator_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

}  // namespace floquet_sb
