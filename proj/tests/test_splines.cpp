#include "hessiga/errors.hpp"
#include "hessiga/quadrature.hpp"
#include "hessiga/splines.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hessiga;

namespace {

std::vector<SplineSpace> all_spaces() {
  std::vector<SplineSpace> out;
  for (int p = 0; p <= 4; ++p)
    for (int r = -1; r <= p - 1; ++r)
      for (int N : {1, 2, 3, 5, 8}) out.push_back(make_uniform_space(p, r, N));
  return out;
}

} // namespace

TEST(Splines, UniformKnotsAndDimension) {
  const SplineSpace s = make_uniform_space(2, 1, 2);
  EXPECT_EQ(s.knots().values(), (std::vector<double>{0, 0, 0, 0.5, 1, 1, 1}));
  EXPECT_EQ(s.dim(), 4);
  EXPECT_EQ(make_uniform_space(0, -1, 3).dim(), 3);
  EXPECT_EQ(make_uniform_space(2, 1, 1).dim(), 3);
  for (int p = 0; p <= 4; ++p)
    for (int r = -1; r < p; ++r)
      for (int N = 1; N <= 6; ++N)
        EXPECT_EQ(make_uniform_space(p, r, N).dim(), p + 1 + (N - 1) * (p - r));
}

TEST(Splines, InvalidParameters) {
  EXPECT_THROW(make_uniform_space(2, 2, 2), ParameterError);
  EXPECT_THROW(make_uniform_space(2, -2, 2), ParameterError);
  EXPECT_THROW(make_uniform_space(-1, -1, 2), ParameterError);
  EXPECT_THROW(make_uniform_space(2, 1, 0), ParameterError);
  EXPECT_THROW(KnotVector({0, 0, 0.5, 1, 1, 1}, 2), ParameterError);  // not p-open
  EXPECT_THROW(KnotVector({0, 0, 0, 0.6, 0.5, 1, 1, 1}, 2), ParameterError);
  EXPECT_THROW(SplineSpace(KnotVector({0, 0, 0, 0.5, 0.5, 1, 1, 1}, 2), 1), ParameterError);
}

TEST(Splines, BernsteinValues) {
  const SplineSpace s = make_uniform_space(2, 1, 1);
  EXPECT_NEAR(s.basis(0, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(s.basis(1, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(s.basis(2, 0.5), 0.25, 1e-15);
  for (double x : {0.0, 0.2, 0.7, 1.0}) {
    EXPECT_NEAR(s.basis(0, x), (1 - x) * (1 - x), 1e-14);
    EXPECT_NEAR(s.basis(1, x), 2 * x * (1 - x), 1e-14);
    EXPECT_NEAR(s.basis(2, x), x * x, 1e-14);
  }
  EXPECT_NEAR(s.basis_derivative(0, 0.5, 1), -1.0, 1e-14);
  EXPECT_THROW(s.basis(3, 0.5), ParameterError);
  EXPECT_THROW(s.basis_derivative(0, 0.5, 3), ParameterError);
}

TEST(Splines, PiecewiseConstants) {
  const SplineSpace s = make_uniform_space(0, -1, 2);
  EXPECT_EQ(s.basis(0, 0.25), 1.0);
  EXPECT_EQ(s.basis(1, 0.25), 0.0);
  EXPECT_EQ(s.basis(1, 1.0), 1.0);
}

TEST(Splines, PartitionOfUnityNonnegativityLocality) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : all_spaces()) {
    const int p = s.degree();
    for (int k = 0; k < 1000; ++k) {
      const double x = u(gen);
      double sum = 0.0;
      for (int i = 0; i < s.dim(); ++i) {
        const double b = s.basis(i, x);
        ASSERT_GE(b, 0.0);
        if (x < s.knots()[i] || x > s.knots()[i + p + 1]) ASSERT_EQ(b, 0.0);
        sum += b;
      }
      ASSERT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(Splines, TriangularSchemeMatchesRecursion) {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& s : all_spaces()) {
    const int p = s.degree();
    Eigen::MatrixXd vals(p + 1, p + 1);
    for (int k = 0; k < 20; ++k) {
      const double x = k == 0 ? 1.0 : u(gen);
      const int first = s.eval_active(x, p, vals);
      for (int d = 0; d <= p; ++d)
        for (int j = 0; j <= p; ++j) {
          const double ref = d == 0 ? s.basis(first + j, x) : s.basis_derivative(first + j, x, d);
          ASSERT_NEAR(vals(d, j), ref, 1e-9 * (1 + std::abs(ref)));
        }
    }
  }
}

TEST(Splines, DerivativeMatchesFiniteDifference) {
  const SplineSpace s = make_uniform_space(2, 1, 2);
  const double h = 1e-6, x = 0.25;
  const double fd = (s.basis(1, x + h) - s.basis(1, x - h)) / (2 * h);
  EXPECT_NEAR(s.basis_derivative(1, x, 1), fd, 1e-6);
}

TEST(Splines, DerivativeMatrixBernstein) {
  const Eigen::MatrixXd E(make_uniform_space(2, 1, 1).derivative_matrix());
  Eigen::MatrixXd ref(2, 3);
  ref << -2, 2, 0, 0, -2, 2;
  EXPECT_LT((E - ref).norm(), 1e-14);
  EXPECT_THROW(make_uniform_space(0, -1, 2).derivative_matrix(), ParameterError);
}

TEST(Splines, DerivativeMatrixIsPointwiseDerivative) {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p = 1; p <= 4; ++p)
    for (int r = 0; r < p; ++r)
      for (int N : {1, 2, 4, 8}) {
        const SplineSpace s = make_uniform_space(p, r, N);
        const SplineSpace d = s.derivative_space();
        EXPECT_EQ(d.degree(), p - 1);
        EXPECT_EQ(d.regularity(), r - 1);
        const Eigen::MatrixXd E(s.derivative_matrix());
        ASSERT_EQ(E.rows(), d.dim());
        EXPECT_LT((E * Eigen::VectorXd::Ones(s.dim())).norm(), 1e-12);
        for (int k = 0; k < 10; ++k) {
          const double x = u(gen);
          for (int i = 0; i < s.dim(); ++i) {
            double v = 0.0;
            for (int j = 0; j < d.dim(); ++j) v += E(j, i) * d.basis(j, x);
            ASSERT_NEAR(v, s.basis_derivative(i, x, 1), 1e-12 * (1 + std::abs(v)));
          }
        }
      }
}

TEST(Splines, SmoothnessAcrossBreakpoints) {
  const double eps = 1e-9;
  for (int p = 1; p <= 4; ++p)
    for (int r = 0; r < p; ++r) {
      const SplineSpace s = make_uniform_space(p, r, 4);
      for (double xb : {0.25, 0.5, 0.75})
        for (int i = 0; i < s.dim(); ++i) {
          // One-sided limits by linear extrapolation from each side.
          const double left = 2 * s.basis(i, xb - eps) - s.basis(i, xb - 2 * eps);
          const double right = 2 * s.basis(i, xb + eps) - s.basis(i, xb + 2 * eps);
          ASSERT_NEAR(left, right, 1e-12);
          if (r >= 1) {
            const double dl = s.basis_derivative(i, xb - eps, 1), dr = s.basis_derivative(i, xb + eps, 1);
            ASSERT_NEAR(dl, dr, 1e-6 * (1 + std::abs(dl)));
          }
        }
    }
}

TEST(Splines, SupportExtension) {
  const Interval whole = make_uniform_space(2, 1, 1).support_extension(0);
  EXPECT_DOUBLE_EQ(whole.lo, 0.0);
  EXPECT_DOUBLE_EQ(whole.hi, 1.0);

  const SplineSpace s = make_uniform_space(2, 1, 4);
  EXPECT_DOUBLE_EQ(s.support_extension(0).lo, 0.0);
  EXPECT_DOUBLE_EQ(s.support_extension(0).hi, 0.75);
  // Union of the supports of the basis functions active on [0.25, 0.5].
  EXPECT_DOUBLE_EQ(s.support_extension(1).lo, 0.0);
  EXPECT_DOUBLE_EQ(s.support_extension(1).hi, 1.0);
  for (int e = 0; e < 4; ++e) {
    double lo = 1.0, hi = 0.0;
    for (int j = 0; j <= 2; ++j) {
      const Interval sup = s.support(s.first_active(e) + j);
      lo = std::min(lo, sup.lo);
      hi = std::max(hi, sup.hi);
    }
    EXPECT_DOUBLE_EQ(s.support_extension(e).lo, lo);
    EXPECT_DOUBLE_EQ(s.support_extension(e).hi, hi);
  }

  const Interval own = make_uniform_space(0, -1, 3).support_extension(1);
  EXPECT_NEAR(own.lo, 1.0 / 3, 1e-15);
  EXPECT_NEAR(own.hi, 2.0 / 3, 1e-15);
  EXPECT_THROW(s.support_extension(4), ParameterError);
}

TEST(Splines, ElementLookupAndMesh) {
  const SplineSpace s = make_uniform_space(3, 2, 4);
  EXPECT_EQ(s.element_of(0.0), 0);
  EXPECT_EQ(s.element_of(0.25), 1);
  EXPECT_EQ(s.element_of(1.0), 3);
  EXPECT_DOUBLE_EQ(s.mesh().h(), 0.25);
  EXPECT_EQ(s.knots().multiplicity(0.5), 1);
  EXPECT_EQ(s.knots().breakpoints().size(), 5u);
}

TEST(Quadrature, GaussExactness) {
  for (int q = 1; q <= 10; ++q) {
    const GaussRule g = gauss_legendre(q, 0.2, 0.9);
    for (int deg = 0; deg <= 2 * q - 1; ++deg) {
      double s = 0.0;
      for (int k = 0; k < q; ++k) s += g.weights[k] * std::pow(g.points[k], deg);
      const double exact = (std::pow(0.9, deg + 1) - std::pow(0.2, deg + 1)) / (deg + 1);
      ASSERT_NEAR(s, exact, 1e-14);
    }
  }
}
