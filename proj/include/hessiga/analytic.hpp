#pragma once

#include "hessiga/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <tuple>
#include <vector>

namespace hessiga {

/// Univariate factor sin^s(pi t) cos^c(pi t) t^m with c in {0, 1}.
struct Factor {
  int s = 0;
  int c = 0;
  int m = 0;

  auto operator<=>(const Factor&) const = default;
  double operator()(double t) const;
};

using GridAxes = std::array<std::vector<double>, 3>;

/// Finite sum of coefficient * f1(z1) f2(z2) f3(z3) over univariate factors.
/// The class is closed under differentiation and products.
class SeparableScalar {
public:
  using Key = std::array<Factor, 3>;

  SeparableScalar() = default;

  static SeparableScalar constant(double value);
  static SeparableScalar term(double coef, const Factor& f1, const Factor& f2, const Factor& f3);
  /// coef * z1^m1 z2^m2 z3^m3.
  static SeparableScalar monomial(double coef, int m1, int m2, int m3);
  /// sin^n(pi z1) sin^n(pi z2) sin^n(pi z3).
  static SeparableScalar sine_product(int n);
  /// The affine function z -> row . z + shift.
  static SeparableScalar linear(const Vec3& row, double shift);

  SeparableScalar derivative(int axis) const;
  SeparableScalar derivative(const std::array<int, 3>& alpha) const;

  double operator()(const Vec3& z) const;
  /// Values on the tensor grid of the three axes, last axis fastest.
  Eigen::VectorXd evaluate_grid(const GridAxes& axes) const;

  const std::map<Key, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  SeparableScalar& operator+=(const SeparableScalar& other);
  SeparableScalar& operator-=(const SeparableScalar& other);
  SeparableScalar& operator*=(double a);
  friend SeparableScalar operator+(SeparableScalar a, const SeparableScalar& b) { return a += b; }
  friend SeparableScalar operator-(SeparableScalar a, const SeparableScalar& b) { return a -= b; }
  friend SeparableScalar operator-(SeparableScalar a) { return a *= -1.0; }
  friend SeparableScalar operator*(double a, SeparableScalar b) { return b *= a; }
  friend SeparableScalar operator*(const SeparableScalar& a, const SeparableScalar& b);

  void add_term(const Key& key, double coef);

private:
  std::map<Key, double> terms_;
};

/// Integral over the unit cube.
double integrate_unit_cube(const SeparableScalar& f);

using ScalarExpr = SeparableScalar;
using VectorExpr = std::array<SeparableScalar, 3>;
using MatrixExpr = std::array<SeparableScalar, 9>;  // row-major

/// Physical field stored through its entries as functions of the parametric point.
/// Levels: 0 (P1 function), 1 (scalar), 2 (symmetric matrix), 3 (traceless matrix), 4 (vector).
struct AnalyticField {
  int level = 1;
  std::vector<SeparableScalar> entries;

  static AnalyticField scalar(const ScalarExpr& f, int level = 1);
  static AnalyticField matrix(const MatrixExpr& m, int level);
  static AnalyticField vector(const VectorExpr& v);
  static AnalyticField zero(int level);

  ScalarExpr as_scalar() const;
  MatrixExpr as_matrix() const;
  VectorExpr as_vector() const;
  /// Pointwise physical entries at the parametric point z.
  std::vector<double> values(const Vec3& z) const;
};

/// Number of physical entries of a level (1, 1, 9, 9, 3).
int level_entries(int level);

/// Physical differential calculus on fields expressed in parametric coordinates.
class Calculus {
public:
  explicit Calculus(const AffineGeometry& geo) : K_(geo.inverse_jacobian()) {}

  /// d/dx_a through the chain rule for the affine map.
  ScalarExpr d(const ScalarExpr& f, int a) const;
  VectorExpr grad(const ScalarExpr& f) const;
  MatrixExpr hessian(const ScalarExpr& f) const;
  /// Row-wise curl.
  MatrixExpr curl(const MatrixExpr& m) const;
  /// Row-wise divergence.
  VectorExpr div(const MatrixExpr& m) const;
  ScalarExpr div(const VectorExpr& v) const;
  ScalarExpr divdiv(const MatrixExpr& m) const;
  /// (grad v)_ij = d_j v_i.
  MatrixExpr grad(const VectorExpr& v) const;

private:
  Mat3 K_;
};

MatrixExpr sym(const MatrixExpr& m);
MatrixExpr dev(const MatrixExpr& m);
MatrixExpr transpose(const MatrixExpr& m);
ScalarExpr trace(const MatrixExpr& m);

/// L2 projection onto P1 = span{1, x, y, z}; the result is affine in z.
ScalarExpr project_p1(const ScalarExpr& phi, const AffineGeometry& geo);

/// Exterior derivative of the complex applied to a level-k field (levels 0..3).
AnalyticField apply_d(const AnalyticField& u, const AffineGeometry& geo);
/// Companion field sigma = d*_k u.
AnalyticField dual_solution(int k, const AnalyticField& u, const AffineGeometry& geo);
/// Right-hand side of the level-k Hodge-Laplacian for the exact solution u.
AnalyticField hodge_rhs(int k, const AnalyticField& u, const AffineGeometry& geo);

} // namespace hessiga
