#pragma once

#include "hessiga/analytic.hpp"
#include "hessiga/complex.hpp"

#include <Eigen/Sparse>

namespace hessiga {

/// Gram matrix G^T G of the pushforward of a level (components x components).
Eigen::MatrixXd level_metric(int level, const AffineGeometry& geo);

/// 1D matrix of integrals of d^a B_i (test space) times d^b B_j (trial space) over [0,1].
Eigen::MatrixXd cross_gram(const SplineSpace& test, int test_order, const SplineSpace& trial, int trial_order);

/// Bilinear form  scale * int (L_test v)^T W (L_trial u)  over the parametric cube, where the operators act
/// on parametric components. Each component pair contributes a sum of Kronecker products of 1D matrices.
SparseMatrix kronecker_form(const FieldLayout& test, const DiffOperator& test_op, const FieldLayout& trial,
                            const DiffOperator& trial_op, const Eigen::MatrixXd& metric, double scale);

/// Same bilinear form by an element loop with q Gauss points per direction: the operator outputs are pushed
/// forward pointwise (pushforward: entries x components) and paired entrywise.
SparseMatrix quadrature_form(const FieldLayout& test, const DiffOperator& test_op, const FieldLayout& trial,
                             const DiffOperator& trial_op, const Eigen::MatrixXd& pushforward, double scale, int q);

/// L2 mass matrix of a level; level 0 is the Gram matrix of {1, x, y, z}.
SparseMatrix mass_matrix(const FieldLayout& layout, const AffineGeometry& geo);
SparseMatrix mass_matrix(int level, const ComplexSpaces& spaces, const AffineGeometry& geo);

/// B = M_k D for the differential D from level k-1 to level k.
SparseMatrix coupling_matrix(int k, const ComplexSpaces& spaces, const AffineGeometry& geo, const SparseMatrix& D);

/// Quadrature points per element used for load vectors when none are given.
int default_load_points(int p);

/// F_i = int_Omega f . basis_i, by sum factorization over the separable terms of f.
Eigen::VectorXd load_vector(const FieldLayout& layout, const AnalyticField& f, const AffineGeometry& geo, int q = 0);

/// Blocks of the level-k mixed problem: sigma mass, coupling <d sigma, v>, stiffness <du, dv>.
struct SaddleBlocks {
  SparseMatrix m_sigma;
  SparseMatrix coupling;
  SparseMatrix stiffness;  // empty for k = 4
};

SaddleBlocks hodge_blocks(int k, const ComplexSpaces& spaces, const AffineGeometry& geo);
/// Same mixed form with every component in S_p^r (no complex structure).
SaddleBlocks naive_hodge_blocks(int k, int p, int r, int N, const AffineGeometry& geo);

/// Symmetric indefinite system [[-M_sigma, B^T], [B, K]] with rhs (0, F).
struct SaddleSystem {
  int level = 0;
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  int n_sigma = 0;
  int n_u = 0;
};

SparseMatrix saddle_matrix(const SaddleBlocks& blocks);
SaddleSystem build_saddle_system(int k, const ComplexSpaces& spaces, const AffineGeometry& geo, const AnalyticField& f);

} // namespace hessiga
