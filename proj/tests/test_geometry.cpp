#include "hessiga/errors.hpp"
#include "hessiga/geometry.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hessiga;

namespace {

std::vector<double> random_values(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

Mat3 to_mat(const std::vector<double>& e) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = e[3 * i + j];
  return m;
}

std::vector<double> to_entries(const Mat3& m) {
  std::vector<double> e(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e[3 * i + j] = m(i, j);
  return e;
}

} // namespace

TEST(Geometry, Construction) {
  const AffineGeometry g = AffineGeometry::deformed_cube();
  Mat3 A;
  A << 1, 0.5, 0.5, 0, 1, 0.5, 0.5, 0, 1;
  EXPECT_LT((g.jacobian() - A).norm(), 1e-15);
  EXPECT_NEAR(g.det(), A.determinant(), 1e-15);
  EXPECT_LT((g.inverse_jacobian() * A - Mat3::Identity()).norm(), 1e-14);
  const Vec3 z(0.2, 0.3, 0.9);
  EXPECT_LT((g.inverse_map(g.map(z)) - z).norm(), 1e-15);

  EXPECT_THROW(AffineGeometry(Mat3::Zero(), Vec3::Zero()), GeometryError);
  Mat3 singular;
  singular << 1, 2, 3, 2, 4, 6, 0, 0, 1;
  EXPECT_THROW(AffineGeometry(singular, Vec3::Zero()), GeometryError);
  const std::vector<double> vals{2, 0, 0, 0, 1, 0, 0, 0, 1, 1, 2, 3};
  const AffineGeometry h = AffineGeometry::from_values(vals);
  EXPECT_DOUBLE_EQ(h.det(), 2.0);
  EXPECT_DOUBLE_EQ(h.offset()[2], 3.0);
  EXPECT_THROW(AffineGeometry::from_values(std::vector<double>(11, 1.0)), ParameterError);
}

TEST(Geometry, ElementDiameter) {
  EXPECT_NEAR(AffineGeometry::identity().element_diameter(2), std::sqrt(3.0) / 2, 1e-15);
}

TEST(Pullback, IdentityGeometryIsIdentity) {
  const AffineGeometry id = AffineGeometry::identity();
  for (auto kind : {PullbackKind::Scalar, PullbackKind::Symmetric, PullbackKind::Traceless, PullbackKind::Vector}) {
    const auto v = random_values(entry_count(kind), 3);
    const auto w = pullback(kind, id, v);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_DOUBLE_EQ(w[i], v[i]);
  }
}

TEST(Pullback, ClosedFormsAndInvariants) {
  const AffineGeometry g = AffineGeometry::deformed_cube();
  const Mat3 J = g.jacobian();
  const double det = g.det();

  Mat3 S = to_mat(random_values(9, 1));
  S = (S + S.transpose()).eval();
  const Mat3 YS = to_mat(pullback(PullbackKind::Symmetric, g, to_entries(S)));
  EXPECT_LT((YS - J.transpose() * S * J).norm(), 1e-14);
  EXPECT_LT((YS - YS.transpose()).cwiseAbs().maxCoeff(), 1e-14);

  Mat3 T = to_mat(random_values(9, 2));
  T(2, 2) = -T(0, 0) - T(1, 1);
  const Mat3 YT = to_mat(pullback(PullbackKind::Traceless, g, to_entries(T)));
  EXPECT_LT((YT - det * J.transpose() * T * J.inverse().transpose()).norm(), 1e-14);
  EXPECT_LT(std::abs(YT.trace()), 1e-14 * T.norm());

  const auto v = random_values(3, 4);
  const auto Yv = pullback(PullbackKind::Vector, g, v);
  const Vec3 ref = det * J.transpose() * Vec3(v[0], v[1], v[2]);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(Yv[i], ref[i], 1e-14);

  const auto back = pushforward(PullbackKind::Vector, g, Yv);
  const Vec3 inv = J.inverse().transpose() * Vec3(Yv[0], Yv[1], Yv[2]) / det;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(back[i], inv[i], 1e-14);
}

TEST(Pullback, RoundTrip) {
  const AffineGeometry g = AffineGeometry::deformed_cube();
  for (auto kind : {PullbackKind::Scalar, PullbackKind::Symmetric, PullbackKind::Traceless, PullbackKind::Vector}) {
    auto v = random_values(entry_count(kind), 8);
    if (kind == PullbackKind::Symmetric) {
      const Mat3 m = to_mat(v);
      v = to_entries(m + m.transpose());
    }
    if (kind == PullbackKind::Traceless) v[8] = -v[0] - v[4];
    const auto w = pushforward(kind, g, pullback(kind, g, v));
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(w[i], v[i], 1e-13);
  }
  EXPECT_THROW(pullback(PullbackKind::Vector, g, random_values(9, 1)), ParameterError);
}

TEST(Pullback, ComponentMatricesMatchPointwiseMaps) {
  const AffineGeometry g = AffineGeometry::deformed_cube();
  for (auto kind : {PullbackKind::Symmetric, PullbackKind::Traceless, PullbackKind::Vector}) {
    const Eigen::MatrixXd G = pushforward_matrix(kind, g);
    const Eigen::MatrixXd P = pullback_matrix(kind, g);
    ASSERT_EQ(G.rows(), entry_count(kind));
    ASSERT_EQ(G.cols(), component_count(kind));
    EXPECT_LT((P * G - Eigen::MatrixXd::Identity(G.cols(), G.cols())).norm(), 1e-13);
    const auto c = random_values(component_count(kind), 12);
    std::vector<double> param_entries;
    if (kind == PullbackKind::Symmetric) param_entries = to_entries(sym_matrix(c));
    else if (kind == PullbackKind::Traceless) param_entries = to_entries(tr_matrix(c));
    else param_entries = c;
    const auto phys = pushforward(kind, g, param_entries);
    const Eigen::VectorXd viaG = G * Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
    for (std::size_t i = 0; i < phys.size(); ++i) EXPECT_NEAR(viaG[i], phys[i], 1e-13);
  }
}

TEST(Pullback, SymAndTrLayouts) {
  Mat3 T = to_mat(random_values(9, 6));
  T(2, 2) = -T(0, 0) - T(1, 1);
  const auto t = tr_components(T);
  EXPECT_DOUBLE_EQ(t[4], -T(2, 2));
  EXPECT_DOUBLE_EQ(t[3], T(1, 0));
  EXPECT_LT((tr_matrix(t) - T).norm(), 1e-15);
  Mat3 S = to_mat(random_values(9, 7));
  S = (S + S.transpose()).eval();
  EXPECT_LT((sym_matrix(sym_components(S)) - S).norm(), 1e-15);
}

TEST(Pullback, CommutingDiagrams) {
  const PullbackResiduals id = verify_commuting_pullbacks(AffineGeometry::identity(), quadratic_test_fields());
  EXPECT_LT(std::max({id.hessian, id.curl, id.divergence}), 1e-14);
  const AffineGeometry g = AffineGeometry::deformed_cube();
  const PullbackResiduals quad = verify_commuting_pullbacks(g, quadratic_test_fields());
  EXPECT_LT(std::max({quad.hessian, quad.curl, quad.divergence}), 1e-12);
  const PullbackResiduals sine = verify_commuting_pullbacks(g, sine_test_fields(g));
  EXPECT_LT(std::max({sine.hessian, sine.curl, sine.divergence}), 1e-8);
}

TEST(Jet, DerivativesOfProducts) {
  const Jet x = Jet::variable(0.3, 0), y = Jet::variable(0.7, 1);
  const Jet f = pow(sin(x), 2) * cos(y);
  EXPECT_NEAR(f.g[0], 2 * std::sin(0.3) * std::cos(0.3) * std::cos(0.7), 1e-15);
  EXPECT_NEAR(f.h(0, 1), -2 * std::sin(0.3) * std::cos(0.3) * std::sin(0.7), 1e-15);
  EXPECT_NEAR(f.h(1, 1), -std::pow(std::sin(0.3), 2) * std::cos(0.7), 1e-15);
}
