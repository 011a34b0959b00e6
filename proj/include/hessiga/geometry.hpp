#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace hessiga {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// F(zeta) = A zeta + b on the unit cube.
class AffineGeometry {
public:
  AffineGeometry(const Mat3& A, const Vec3& b);

  static AffineGeometry identity();
  /// The sheared cube used by the manufactured examples.
  static AffineGeometry deformed_cube();
  /// Nine matrix entries (row-major) followed by three offsets.
  static AffineGeometry from_values(std::span<const double> values);

  const Mat3& jacobian() const { return A_; }
  const Mat3& inverse_jacobian() const { return Ainv_; }
  const Vec3& offset() const { return b_; }
  double det() const { return det_; }
  double volume() const { return std::abs(det_); }

  Vec3 map(const Vec3& zeta) const { return A_ * zeta + b_; }
  Vec3 inverse_map(const Vec3& x) const { return Ainv_ * (x - b_); }

  /// Diameter of the image of a parametric cube of side 1/N.
  double element_diameter(int N) const;

private:
  Mat3 A_;
  Vec3 b_;
  Mat3 Ainv_;
  double det_;
};

enum class PullbackKind { Scalar = 1, Symmetric = 2, Traceless = 3, Vector = 4 };

/// Physical entries: 1 (scalar), 9 (matrix, row-major) or 3 (vector).
int entry_count(PullbackKind kind);
/// Stored components: 1, 6 (SYM), 8 (TR) or 3.
int component_count(PullbackKind kind);

/// Pointwise transforms on physical entries; composition with F is the caller's sampling.
std::vector<double> pullback(PullbackKind kind, const AffineGeometry& geo, std::span<const double> values);
std::vector<double> pushforward(PullbackKind kind, const AffineGeometry& geo, std::span<const double> values);

// Matrix layouts of the stored components.
Mat3 sym_matrix(std::span<const double> s);
Mat3 tr_matrix(std::span<const double> t);
std::array<double, 6> sym_components(const Mat3& m);
std::array<double, 8> tr_components(const Mat3& m);

/// Physical entries from parametric components: entries x components.
Eigen::MatrixXd pushforward_matrix(PullbackKind kind, const AffineGeometry& geo);
/// Parametric components from physical entries: components x entries.
Eigen::MatrixXd pullback_matrix(PullbackKind kind, const AffineGeometry& geo);

/// Value, gradient and Hessian of a function of three variables.
struct Jet {
  double v = 0.0;
  Vec3 g = Vec3::Zero();
  Mat3 h = Mat3::Zero();

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly
  static Jet variable(double value, int axis);
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, int n);

using JetPoint = std::array<Jet, 3>;
using JetMatrix = std::array<Jet, 9>;

/// Physical test fields for the pullback commuting identities.
struct PullbackTestFields {
  std::function<Jet(const JetPoint&)> phi;
  std::function<JetMatrix(const JetPoint&)> sym;
  std::function<JetMatrix(const JetPoint&)> traceless;
};

PullbackTestFields quadratic_test_fields();
/// sin-power products of F^{-1}(x), as in the manufactured solutions.
PullbackTestFields sine_test_fields(const AffineGeometry& geo);

struct PullbackResiduals {
  double hessian = 0.0;
  double curl = 0.0;
  double divergence = 0.0;
};

/// Relative L2 residuals of grad^2 Y1 - Y2 grad^2, curl Y2 - Y3 curl and div Y3 - Y4 div.
PullbackResiduals verify_commuting_pullbacks(const AffineGeometry& geo, const PullbackTestFields& fields,
                                             int points_per_direction = 8);

} // namespace hessiga
