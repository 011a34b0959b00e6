#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>

namespace hessiga {

using Dims3 = std::array<int, 3>;

inline int flat_index(const Dims3& n, int i1, int i2, int i3) { return (i1 * n[1] + i2) * n[2] + i3; }

/// y = (A1 kron A2 kron A3) x for a tensor x stored with the last index fastest.
Eigen::VectorXd kron_apply(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2, const Eigen::MatrixXd& A3,
                           const Eigen::VectorXd& x);

/// Sparse A1 kron A2 kron A3.
Eigen::SparseMatrix<double> kron3(const Eigen::SparseMatrix<double>& A1, const Eigen::SparseMatrix<double>& A2,
                                  const Eigen::SparseMatrix<double>& A3);

Eigen::SparseMatrix<double> sparse_identity(int n);

} // namespace hessiga
