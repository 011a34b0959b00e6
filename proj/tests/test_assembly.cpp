#include "hessiga/assembly.hpp"
#include "hessiga/errors.hpp"
#include "hessiga/problems.hpp"
#include "hessiga/projection.hpp"
#include "hessiga/solve.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hessiga;

namespace {

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(gen);
  return v;
}

double max_abs(const SparseMatrix& A) {
  double m = 0.0;
  for (int j = 0; j < A.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(A, j); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double relative_difference(const SparseMatrix& A, const SparseMatrix& B) {
  return max_abs(A - B) / std::max(max_abs(A), max_abs(B));
}

// Univariate Gram matrix by per-index basis evaluation and Gauss quadrature.
Eigen::MatrixXd gram_1d(const SplineSpace& s) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(s.dim(), s.dim());
  for (int e = 0; e < s.elements(); ++e) {
    const double a = s.mesh().breakpoints[e], b = s.mesh().breakpoints[e + 1];
    const GaussRule ge = gauss_legendre(s.degree() + 2, a, b);
    for (std::size_t k = 0; k < ge.points.size(); ++k)
      for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j)
          G(i, j) += ge.weights[k] * s.basis(i, ge.points[k]) * s.basis(j, ge.points[k]);
  }
  return G;
}

} // namespace

TEST(MassMatrix, BernsteinCornerEntry) {
  const ComplexSpaces s(2, 1, 1);
  const SparseMatrix M = mass_matrix(1, s, AffineGeometry::identity());
  EXPECT_NEAR(M.coeff(0, 0), 1.0 / 125.0, 1e-15);
}

TEST(MassMatrix, IdentityGeometryIsKroneckerOfGrams) {
  const ComplexSpaces s(3, 2, 2);
  const SparseMatrix M = mass_matrix(2, s, AffineGeometry::identity());
  const FieldLayout& L = s.level(2);
  for (int c = 0; c < L.components(); ++c) {
    const auto& ax = L.component(c).axes;
    const SparseMatrix K =
        kron3(gram_1d(ax[0]).sparseView(), gram_1d(ax[1]).sparseView(), gram_1d(ax[2]).sparseView());
    const int o = L.offset(c), n = L.component(c).size();
    const SparseMatrix block = M.block(o, o, n, n);
    // Off-diagonal SYM entries count twice in the Frobenius product.
    const double w = (c == 1 || c == 2 || c == 4) ? 2.0 : 1.0;
    EXPECT_LT(relative_difference(block, w * K), 1e-13) << c;
  }
}

TEST(MassMatrix, SymmetricPositiveDefinite) {
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  const ComplexSpaces s(2, 1, 2);
  for (int k = 0; k <= 4; ++k) {
    const SparseMatrix M = mass_matrix(k, s, geo);
    EXPECT_LT(max_abs(M - SparseMatrix(M.transpose())), 1e-14 * max_abs(M));
    for (unsigned t = 0; t < 20; ++t) {
      const Eigen::VectorXd x = random_vector(static_cast<int>(M.rows()), 100 + t);
      EXPECT_GT(x.dot(M * x), 0.0);
    }
  }
}

TEST(KroneckerForm, MatchesElementQuadrature) {
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  const ComplexSpaces s(2, 1, 2);
  for (int k = 1; k <= 4; ++k) {
    const FieldLayout& L = s.level(k);
    const auto kind = static_cast<PullbackKind>(k);
    const SparseMatrix M = mass_matrix(k, s, geo);
    const DiffOperator id = identity_operator(L.components());
    const SparseMatrix Q = quadrature_form(L, id, L, id, pushforward_matrix(kind, geo), geo.volume(), 4);
    EXPECT_LT(relative_difference(M, Q), 1e-12) << "mass level " << k;
    if (k < 4) {
      const FieldLayout& T = s.level(k + 1);
      const SparseMatrix D = differential_matrix(level_operator(k), L, T);
      const SparseMatrix K = SparseMatrix(D.transpose()) * mass_matrix(k + 1, s, geo) * D;
      const DiffOperator d = level_operator(k);
      const SparseMatrix KQ = quadrature_form(L, d, L, d, pushforward_matrix(static_cast<PullbackKind>(k + 1), geo),
                                              geo.volume(), 4);
      EXPECT_LT(relative_difference(K, KQ), 1e-12) << "stiffness level " << k;
    }
  }
}

TEST(KroneckerForm, QuadratureOrderRobust) {
  const AffineGeometry id = AffineGeometry::identity();
  const ComplexSpaces s(3, 2, 2);
  const FieldLayout& L = s.level(3);
  const DiffOperator op = identity_operator(L.components());
  const Eigen::MatrixXd G = pushforward_matrix(PullbackKind::Traceless, id);
  EXPECT_LT(relative_difference(quadrature_form(L, op, L, op, G, 1.0, 5), quadrature_form(L, op, L, op, G, 1.0, 10)),
            1e-12);
}

TEST(Coupling, AnnihilatesP1AndMatchesParametricOnIdentity) {
  const ComplexSpaces s(2, 1, 2);
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  const SparseMatrix B = coupling_matrix(2, s, geo, hessian_matrix(s));
  const Eigen::VectorXd lin = p1_embedding(s, geo) * Eigen::Vector4d(1, 2, -1, 0.5);
  EXPECT_LT((B * lin).cwiseAbs().maxCoeff(), 1e-12);

  const AffineGeometry id = AffineGeometry::identity();
  const SparseMatrix Bid = coupling_matrix(3, s, id, curl_matrix(s));
  const SparseMatrix ref = mass_matrix(3, s, id) * curl_matrix(s);
  EXPECT_LT(relative_difference(Bid, ref), 1e-15);
  EXPECT_THROW(coupling_matrix(3, s, id, hessian_matrix(s)), ParameterError);
}

TEST(Coupling, DivergenceTheoremForCompactSupport) {
  // T with components vanishing near the boundary: int div T = 0, so constants see nothing.
  const ComplexSpaces s(2, 1, 4);
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  const ScalarExpr v = ScalarExpr::sine_product(2), zero;
  const Eigen::VectorXd t =
      physical_project(3, s, geo, AnalyticField::matrix({v, v, v, zero, v, zero, zero, zero, -2.0 * v}, 3));
  const SparseMatrix B = coupling_matrix(4, s, geo, div_matrix(s));
  const Eigen::VectorXd ones = physical_project(4, s, geo, AnalyticField::vector({1.0 * ScalarExpr::constant(1.0),
                                                                                   ScalarExpr::constant(0.0),
                                                                                   ScalarExpr::constant(0.0)}));
  const double flux = ones.dot(B * t);
  EXPECT_NEAR(flux, 0.0, 1e-10);
}

TEST(LoadVector, ZeroAndBasisFunctions) {
  const ComplexSpaces s(2, 1, 2);
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  EXPECT_EQ(load_vector(s.level(2), AnalyticField::zero(2), geo).norm(), 0.0);

  // f in the discrete space: the load vector is M times its coefficients.
  const AnalyticField poly = AnalyticField::vector(
      {ScalarExpr::monomial(1.0, 0, 1, 1), ScalarExpr::monomial(-1.0, 1, 0, 1), ScalarExpr::monomial(0.5, 1, 1, 0)});
  const Eigen::VectorXd c = physical_project(4, s, AffineGeometry::identity(), poly);
  const Eigen::VectorXd F = load_vector(s.level(4), poly, AffineGeometry::identity());
  EXPECT_LT((F - mass_matrix(4, s, AffineGeometry::identity()) * c).norm(), 1e-13 * F.norm());
  EXPECT_THROW(load_vector(s.level(4), AnalyticField::zero(3), geo), ParameterError);
}

TEST(LoadVector, QuadratureOrderConsistency) {
  const ComplexSpaces s(2, 1, 2);
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  const HodgeCase hc = manufactured_case(1, geo);
  const Eigen::VectorXd a = load_vector(s.level(1), hc.f, geo, default_load_points(2));
  const Eigen::VectorXd b = load_vector(s.level(1), hc.f, geo, default_load_points(2) + 2);
  EXPECT_LT((a - b).norm(), 1e-10 * a.norm());
}

TEST(SaddleSystem, ShapesAndSymmetry) {
  const ComplexSpaces s(2, 1, 2);
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  for (int k = 1; k <= 4; ++k) {
    const SaddleSystem sys = build_saddle_system(k, s, geo, AnalyticField::zero(k));
    EXPECT_EQ(sys.n_sigma, s.level(k - 1).size());
    EXPECT_EQ(sys.n_u, s.level(k).size());
    EXPECT_LT(max_abs(sys.matrix - SparseMatrix(sys.matrix.transpose())), 1e-14 * max_abs(sys.matrix));
    const SolveResult zero = solve_symmetric(sys.matrix, sys.rhs);
    EXPECT_EQ(zero.x.norm(), 0.0);
    const Eigen::VectorXd b = random_vector(static_cast<int>(sys.matrix.rows()), k);
    const SolveResult r = solve_symmetric(sys.matrix, b, SolveConfig{SolveMethod::Direct});
    EXPECT_LT(r.report.residual, 1e-10) << k;
  }
  EXPECT_EQ(build_saddle_system(1, s, geo, AnalyticField::zero(1)).n_sigma, 4);
  EXPECT_THROW(build_saddle_system(5, s, geo, AnalyticField::zero(4)), ParameterError);
}

TEST(SaddleSystem, ConstantRhsLevelOne) {
  const ComplexSpaces s(2, 1, 2);
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  const SaddleSystem sys = build_saddle_system(1, s, geo, AnalyticField::scalar(ScalarExpr::constant(1.0), 1));
  const SolveResult r = solve_symmetric(sys.matrix, sys.rhs, SolveConfig{SolveMethod::Direct});
  EXPECT_LT(r.report.residual, 1e-10);
  // The constant is a P1 function: sigma = u = 1 reproduces it.
  const Eigen::VectorXd u = r.x.tail(sys.n_u);
  EXPECT_LT((u.array() - 1.0).abs().maxCoeff(), 1e-9);
}

TEST(NaiveBlocks, Counts) {
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  const SaddleBlocks b = naive_hodge_blocks(2, 2, 1, 2, geo);
  const int scalar = make_uniform_space(2, 1, 2).dim();
  EXPECT_EQ(b.m_sigma.rows() + b.coupling.rows(), 6 * scalar * scalar * scalar + scalar * scalar * scalar);
  EXPECT_THROW(naive_hodge_blocks(1, 2, 1, 2, geo), ParameterError);
}
