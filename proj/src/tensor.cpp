#include "hessiga/tensor.hpp"

#include "hessiga/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace hessiga {

Eigen::VectorXd kron_apply(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2, const Eigen::MatrixXd& A3,
                           const Eigen::VectorXd& x) {
  const Eigen::Index n1 = A1.cols(), n2 = A2.cols(), n3 = A3.cols();
  const Eigen::Index m1 = A1.rows(), m2 = A2.rows(), m3 = A3.rows();
  if (x.size() != n1 * n2 * n3) throw ParameterError("kron_apply: input size mismatch");

  Eigen::MatrixXd y3 = A3 * Eigen::Map<const Eigen::MatrixXd>(x.data(), n3, n1 * n2);
  Eigen::MatrixXd y2(m3, m2 * n1);
  for (Eigen::Index i1 = 0; i1 < n1; ++i1) {
    y2.middleCols(i1 * m2, m2).noalias() = y3.middleCols(i1 * n2, n2) * A2.transpose();
  }
  Eigen::VectorXd y(m1 * m2 * m3);
  Eigen::Map<Eigen::MatrixXd>(y.data(), m3 * m2, m1).noalias() =
      Eigen::Map<const Eigen::MatrixXd>(y2.data(), m3 * m2, n1) * A1.transpose();
  return y;
}

Eigen::SparseMatrix<double> kron3(const Eigen::SparseMatrix<double>& A1, const Eigen::SparseMatrix<double>& A2,
                                  const Eigen::SparseMatrix<double>& A3) {
  Eigen::SparseMatrix<double> a12 = Eigen::kroneckerProduct(A1, A2);
  Eigen::SparseMatrix<double> out = Eigen::kroneckerProduct(a12, A3);
  return out;
}

Eigen::SparseMatrix<double> sparse_identity(int n) {
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  return I;
}

} // namespace hessiga
