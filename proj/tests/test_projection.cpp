#include "hessiga/errors.hpp"
#include "hessiga/fields.hpp"
#include "hessiga/problems.hpp"
#include "hessiga/projection.hpp"

#include <gtest/gtest.h>

#include <cmath>
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

double spline_value(const SplineSpace& s, const Eigen::VectorXd& c, double x, int order = 0) {
  double v = 0.0;
  for (int i = 0; i < s.dim(); ++i) v += c[i] * (order == 0 ? s.basis(i, x) : s.basis_derivative(i, x, order));
  return v;
}

} // namespace

TEST(DualFunctionals, Biorthogonality) {
  for (int p = 0; p <= 4; ++p)
    for (int r = -1; r < p; ++r)
      for (int N : {1, 2, 4}) {
        const SplineSpace s = make_uniform_space(p, r, N);
        const DualFunctionals dual(s, 0);
        for (int j = 0; j < s.dim(); ++j) {
          const Eigen::VectorXd c = dual.apply([&](double x) { return s.basis(j, x); });
          ASSERT_LT((c - Eigen::VectorXd::Unit(s.dim(), j)).cwiseAbs().maxCoeff(), 1e-10);
        }
      }
}

TEST(DualFunctionals, ConstantsAndLocality) {
  const SplineSpace s = make_uniform_space(2, 1, 4);
  const DualFunctionals dual = build_dual_functionals(s);
  EXPECT_LT((dual.apply([](double) { return 1.0; }) - Eigen::VectorXd::Ones(s.dim())).norm(), 1e-12);
  // A function vanishing on supp B_1 = [0, 0.5].
  const auto far = [](double x) { return x > 0.5 ? std::sin(10 * x) : 0.0; };
  EXPECT_EQ(dual.apply(far)[1], 0.0);
}

TEST(UnivariateProjector, TargetsAndPreconditions) {
  const SplineSpace s = make_uniform_space(3, 2, 4);
  const UnivariateProjector c1(ProjectorKind::C1, s), c2(ProjectorKind::C2, s);
  EXPECT_EQ(c1.target().degree(), 2);
  EXPECT_EQ(c1.target().regularity(), 1);
  EXPECT_EQ(c2.target().degree(), 1);
  EXPECT_EQ(c2.target().regularity(), 0);
  EXPECT_THROW(UnivariateProjector(ProjectorKind::C2, make_uniform_space(2, 0, 2)), ParameterError);
  EXPECT_THROW(UnivariateProjector(ProjectorKind::C1, make_uniform_space(1, -1, 2)), ParameterError);
}

TEST(UnivariateProjector, SplineReproduction) {
  for (int p = 2; p <= 4; ++p)
    for (int N : {2, 4, 8}) {
      const SplineSpace s = make_uniform_space(p, p - 1, N);
      for (auto kind : {ProjectorKind::Plain, ProjectorKind::C1, ProjectorKind::C2}) {
        const UnivariateProjector P(kind, s);
        const SplineSpace& t = P.target();
        const Eigen::VectorXd c = random_vector(t.dim(), 100 * p + N);
        const Eigen::VectorXd back = P.project([&](double x) { return spline_value(t, c, x); });
        ASSERT_LT((back - c).cwiseAbs().maxCoeff(), 1e-10) << "p=" << p << " N=" << N;
      }
    }
}

TEST(UnivariateProjector, ConstantsInLowerSpaces) {
  const UnivariateProjector c2(ProjectorKind::C2, make_uniform_space(3, 2, 4));
  EXPECT_LT((c2.project([](double) { return 1.0; }) - Eigen::VectorXd::Ones(c2.target().dim())).norm(), 1e-12);
  const UnivariateProjector c1(ProjectorKind::C1, make_uniform_space(2, 1, 4));
  EXPECT_LT((c1.project([](double x) { return 2 * x; }) -
             Eigen::MatrixXd(make_uniform_space(2, 1, 4).derivative_matrix()) *
                 UnivariateProjector(ProjectorKind::Plain, make_uniform_space(2, 1, 4)).project([](double x) {
                   return x * x;
                 }))
                .norm(),
            1e-12);
}

TEST(UnivariateProjector, Commutation) {
  const auto v = [](double x) { return std::exp(x) * std::sin(3 * x); };
  const auto dv = [](double x) { return std::exp(x) * (std::sin(3 * x) + 3 * std::cos(3 * x)); };
  const auto d2v = [](double x) { return std::exp(x) * (6 * std::cos(3 * x) - 8 * std::sin(3 * x)); };
  for (int p = 2; p <= 4; ++p)
    for (int N : {2, 4, 8}) {
      const SplineSpace s = make_uniform_space(p, p - 1, N);
      const Eigen::MatrixXd E1(s.derivative_matrix());
      const Eigen::MatrixXd E2(s.derivative_space().derivative_matrix());
      const Eigen::VectorXd plain = UnivariateProjector(ProjectorKind::Plain, s).project(v);
      const Eigen::VectorXd c1 = UnivariateProjector(ProjectorKind::C1, s).project(dv);
      const Eigen::VectorXd c2 = UnivariateProjector(ProjectorKind::C2, s).project(d2v);
      ASSERT_LT((c1 - E1 * plain).cwiseAbs().maxCoeff(), 1e-8);
      ASSERT_LT((c2 - E2 * c1).cwiseAbs().maxCoeff(), 1e-8);
      ASSERT_LT((c2 - E2 * E1 * plain).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(UnivariateProjector, LocalStability) {
  // ||P v||_inf on an element against ||v||_inf on its support extension.
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int p = 1; p <= 4; ++p)
    for (int N : {4, 8}) {
      const SplineSpace s = make_uniform_space(p, p - 1, N);
      const UnivariateProjector P(ProjectorKind::Plain, s);
      const ElementQuadrature& nodes = P.nodes();
      double worst = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd samples(nodes.size());
        for (int k = 0; k < nodes.size(); ++k) samples[k] = u(gen);
        const Eigen::VectorXd c = P.apply(samples);
        for (int e = 0; e < N; ++e) {
          const Interval ext = s.support_extension(e);
          double vmax = 0.0;
          for (int k = 0; k < nodes.size(); ++k)
            if (nodes.points[k] > ext.lo && nodes.points[k] < ext.hi) vmax = std::max(vmax, std::abs(samples[k]));
          double pmax = 0.0;
          for (int j = 0; j <= p; ++j) pmax = std::max(pmax, std::abs(c[s.first_active(e) + j]));
          worst = std::max(worst, pmax / vmax);
        }
      }
      EXPECT_LE(worst, 100.0) << "p=" << p;
    }
}

TEST(TensorProjector, PolynomialAndConstantReproduction) {
  const ComplexSpaces spaces(3, 2, 2);
  const AffineGeometry id = AffineGeometry::identity();
  const ScalarExpr tri = ScalarExpr::monomial(1.0, 1, 1, 1) + ScalarExpr::monomial(2.0, 1, 0, 0);
  const Eigen::VectorXd c = physical_project(1, spaces, id, AnalyticField::scalar(tri, 1));
  const ErrorQuadrature quad = error_quadrature(2, 6);
  const DiscreteGridField back(spaces.level(1), c, id);
  const AnalyticGridField exact(AnalyticField::scalar(tri, 1));
  EXPECT_LT(l2_distance(back, &exact, quad, id), 1e-12);

  const ScalarExpr one = ScalarExpr::constant(1.0);
  const Eigen::VectorXd v = physical_project(4, spaces, id, AnalyticField::vector({one, one, one}));
  EXPECT_LT((v - Eigen::VectorXd::Ones(v.size())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TensorProjector, ShapeMismatch) {
  const ComplexSpaces spaces(2, 1, 2);
  const TensorProjector P(2, spaces);
  EXPECT_THROW(P.project(std::vector<SeparableScalar>(3)), ParameterError);
  EXPECT_THROW(physical_project(2, spaces, AffineGeometry::identity(), AnalyticField::zero(3)), ParameterError);
}

TEST(TensorProjector, ComponentKinds) {
  const ComplexSpaces spaces(3, 2, 2);
  const TensorProjector P(2, spaces);
  EXPECT_EQ(P.kinds(0), (std::array<ProjectorKind, 3>{ProjectorKind::C2, ProjectorKind::Plain, ProjectorKind::Plain}));
  EXPECT_EQ(P.kinds(1), (std::array<ProjectorKind, 3>{ProjectorKind::C1, ProjectorKind::C1, ProjectorKind::Plain}));
}

TEST(TensorProjector, IdentityGeometryMatchesParametricProjection) {
  const ComplexSpaces spaces(2, 1, 2);
  const AnalyticField w = smooth_test_field(3);
  const Eigen::VectorXd phys = physical_project(3, spaces, AffineGeometry::identity(), w);
  // Parametric TR components of a traceless field taken by hand.
  const auto& e = w.entries;
  const std::vector<SeparableScalar> comps{e[0], e[1], e[2], e[3], -1.0 * e[8], e[5], e[6], e[7]};
  EXPECT_LT((phys - TensorProjector(3, spaces).project(comps)).norm(), 1e-12);
}

TEST(TensorProjector, TracePreservedOnDeformedCube) {
  const ComplexSpaces spaces(2, 1, 2);
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  const Eigen::VectorXd c = physical_project(3, spaces, geo, smooth_test_field(3));
  const DiscreteGridField T(spaces.level(3), c, geo);
  const GridAxes axes{std::vector<double>{0.1, 0.45, 0.8}, {0.3, 0.6}, {0.05, 0.95}};
  const auto entries = T.sample(axes);
  const Eigen::VectorXd trace = entries[0] + entries[4] + entries[8];
  EXPECT_LT(trace.cwiseAbs().maxCoeff(), 1e-12 * (1 + entries[0].cwiseAbs().maxCoeff()));
}

TEST(TensorProjector, CommutingSquares) {
  const AffineGeometry geo = AffineGeometry::deformed_cube();
  for (int p : {2, 3})
    for (int N : {2, 4}) {
      const ComplexSpaces spaces(p, p - 1, N);
      for (int k = 1; k <= 3; ++k) EXPECT_LT(commuting_residual(k, spaces, geo, smooth_test_field(k)), 1e-8);
    }
  const ComplexSpaces spaces(2, 1, 3);
  const AnalyticField phi = AnalyticField::scalar(ScalarExpr::sine_product(2), 1);
  EXPECT_LT(commuting_residual(1, spaces, AffineGeometry::identity(), phi), 1e-8);
  const AnalyticField phi4 = AnalyticField::scalar(ScalarExpr::sine_product(4), 1);
  EXPECT_LT(commuting_residual(1, spaces, geo, phi4), 1e-8);
}

TEST(Kronecker, ApplyMatchesSparseProduct) {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rnd = [&](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = u(gen);
    return m;
  };
  const Eigen::MatrixXd A = rnd(3, 4), B = rnd(2, 5), C = rnd(4, 3);
  const Eigen::VectorXd x = random_vector(4 * 5 * 3, 9);
  const Eigen::SparseMatrix<double> K = kron3(A.sparseView(), B.sparseView(), C.sparseView());
  EXPECT_LT((kron_apply(A, B, C, x) - K * x).norm(), 1e-12);
  // Index convention: last index fastest.
  EXPECT_DOUBLE_EQ(K.coeff(flat_index({3, 2, 4}, 1, 1, 2), flat_index({4, 5, 3}, 3, 4, 0)), A(1, 3) * B(1, 4) * C(2, 0));
}
