#include "hessiga/geometry.hpp"

#include "hessiga/errors.hpp"
#include "hessiga/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace hessiga {

AffineGeometry::AffineGeometry(const Mat3& A, const Vec3& b) : A_(A), b_(b) {
  if (!A.allFinite() || !b.allFinite()) throw GeometryError("geometry has non-finite entries");
  det_ = A.determinant();
  const double scale = A.norm();
  if (scale == 0.0 || std::abs(det_) <= 1e-12 * scale * scale * scale)
    throw GeometryError("geometry Jacobian is singular");
  Ainv_ = A.inverse();
}

AffineGeometry AffineGeometry::identity() { return AffineGeometry(Mat3::Identity(), Vec3::Zero()); }

AffineGeometry AffineGeometry::deformed_cube() {
  Mat3 A;
  A << 1.0, 0.5, 0.5, 0.0, 1.0, 0.5, 0.5, 0.0, 1.0;
  return AffineGeometry(A, Vec3::Zero());
}

AffineGeometry AffineGeometry::from_values(std::span<const double> values) {
  if (values.size() != 12) throw ParameterError("geometry needs 12 values (9 matrix entries, 3 offsets)");
  Mat3 A;
  A << values[0], values[1], values[2], values[3], values[4], values[5], values[6], values[7], values[8];
  return AffineGeometry(A, Vec3(values[9], values[10], values[11]));
}

double AffineGeometry::element_diameter(int N) const {
  double d = 0.0;
  for (double s2 : {-1.0, 1.0})
    for (double s3 : {-1.0, 1.0}) d = std::max(d, (A_ * Vec3(1.0, s2, s3)).norm());
  return d / N;
}

int entry_count(PullbackKind kind) {
  switch (kind) {
  case PullbackKind::Scalar: return 1;
  case PullbackKind::Symmetric:
  case PullbackKind::Traceless: return 9;
  case PullbackKind::Vector: return 3;
  }
  throw ParameterError("unknown pullback kind");
}

int component_count(PullbackKind kind) {
  switch (kind) {
  case PullbackKind::Scalar: return 1;
  case PullbackKind::Symmetric: return 6;
  case PullbackKind::Traceless: return 8;
  case PullbackKind::Vector: return 3;
  }
  throw ParameterError("unknown pullback kind");
}

namespace {

Mat3 as_matrix(std::span<const double> v) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = v[3 * i + j];
  return m;
}

std::vector<double> as_entries(const Mat3& m) {
  std::vector<double> v(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v[3 * i + j] = m(i, j);
  return v;
}

void check_shape(PullbackKind kind, std::span<const double> values) {
  if (static_cast<int>(values.size()) != entry_count(kind))
    throw ParameterError("field shape does not match the pullback kind");
}

} // namespace

std::vector<double> pullback(PullbackKind kind, const AffineGeometry& geo, std::span<const double> values) {
  check_shape(kind, values);
  const Mat3& J = geo.jacobian();
  const Mat3& K = geo.inverse_jacobian();
  switch (kind) {
  case PullbackKind::Scalar: return {values[0]};
  case PullbackKind::Symmetric: return as_entries(J.transpose() * as_matrix(values) * J);
  case PullbackKind::Traceless: return as_entries(geo.det() * J.transpose() * as_matrix(values) * K.transpose());
  case PullbackKind::Vector: {
    const Vec3 v = geo.det() * J.transpose() * Vec3(values[0], values[1], values[2]);
    return {v[0], v[1], v[2]};
  }
  }
  throw ParameterError("unknown pullback kind");
}

std::vector<double> pushforward(PullbackKind kind, const AffineGeometry& geo, std::span<const double> values) {
  check_shape(kind, values);
  const Mat3& J = geo.jacobian();
  const Mat3& K = geo.inverse_jacobian();
  switch (kind) {
  case PullbackKind::Scalar: return {values[0]};
  case PullbackKind::Symmetric: return as_entries(K.transpose() * as_matrix(values) * K);
  case PullbackKind::Traceless: return as_entries(K.transpose() * as_matrix(values) * J.transpose() / geo.det());
  case PullbackKind::Vector: {
    const Vec3 v = K.transpose() * Vec3(values[0], values[1], values[2]) / geo.det();
    return {v[0], v[1], v[2]};
  }
  }
  throw ParameterError("unknown pullback kind");
}

Mat3 sym_matrix(std::span<const double> s) {
  if (s.size() != 6) throw ParameterError("SYM layout needs 6 components");
  Mat3 m;
  m << s[0], s[1], s[2], s[1], s[3], s[4], s[2], s[4], s[5];
  return m;
}

Mat3 tr_matrix(std::span<const double> t) {
  if (t.size() != 8) throw ParameterError("TR layout needs 8 components");
  Mat3 m;
  m << t[0], t[1], t[2], t[3], t[4] - t[0], t[5], t[6], t[7], -t[4];
  return m;
}

std::array<double, 6> sym_components(const Mat3& m) {
  return {m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2)};
}

std::array<double, 8> tr_components(const Mat3& m) {
  return {m(0, 0), m(0, 1), m(0, 2), m(1, 0), -m(2, 2), m(1, 2), m(2, 0), m(2, 1)};
}

namespace {

std::vector<double> components_to_entries(PullbackKind kind, const Eigen::VectorXd& c) {
  switch (kind) {
  case PullbackKind::Scalar: return {c[0]};
  case PullbackKind::Symmetric: return as_entries(sym_matrix(std::span<const double>(c.data(), 6)));
  case PullbackKind::Traceless: return as_entries(tr_matrix(std::span<const double>(c.data(), 8)));
  case PullbackKind::Vector: return {c[0], c[1], c[2]};
  }
  throw ParameterError("unknown pullback kind");
}

std::vector<double> entries_to_components(PullbackKind kind, std::span<const double> e) {
  switch (kind) {
  case PullbackKind::Scalar: return {e[0]};
  case PullbackKind::Symmetric: {
    auto s = sym_components(as_matrix(e));
    return {s.begin(), s.end()};
  }
  case PullbackKind::Traceless: {
    auto t = tr_components(as_matrix(e));
    return {t.begin(), t.end()};
  }
  case PullbackKind::Vector: return {e[0], e[1], e[2]};
  }
  throw ParameterError("unknown pullback kind");
}

} // namespace

Eigen::MatrixXd pushforward_matrix(PullbackKind kind, const AffineGeometry& geo) {
  const int nc = component_count(kind), ne = entry_count(kind);
  Eigen::MatrixXd G(ne, nc);
  for (int c = 0; c < nc; ++c) {
    const Eigen::VectorXd unit = Eigen::VectorXd::Unit(nc, c);
    const auto param = components_to_entries(kind, unit);
    const auto phys = pushforward(kind, geo, param);
    for (int e = 0; e < ne; ++e) G(e, c) = phys[e];
  }
  return G;
}

Eigen::MatrixXd pullback_matrix(PullbackKind kind, const AffineGeometry& geo) {
  const int nc = component_count(kind), ne = entry_count(kind);
  Eigen::MatrixXd P(nc, ne);
  for (int e = 0; e < ne; ++e) {
    std::vector<double> unit(ne, 0.0);
    unit[e] = 1.0;
    const auto param = pullback(kind, geo, unit);
    const auto comps = entries_to_components(kind, param);
    for (int c = 0; c < nc; ++c) P(c, e) = comps[c];
  }
  return P;
}

// ---------------------------------------------------------------------------
// Jets
// ---------------------------------------------------------------------------

Jet Jet::variable(double value, int axis) {
  Jet j(value);
  j.g[axis] = 1.0;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v + b.v;
  r.g = a.g + b.g;
  r.h = a.h + b.h;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v - b.v;
  r.g = a.g - b.g;
  r.h = a.h - b.h;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r;
  r.v = -a.v;
  r.g = -a.g;
  r.h = -a.h;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v * b.v;
  r.g = a.v * b.g + b.v * a.g;
  r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  Jet r;
  r.v = s;
  r.g = c * a.g;
  r.h = c * a.h - s * a.g * a.g.transpose();
  return r;
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  Jet r;
  r.v = c;
  r.g = -s * a.g;
  r.h = -s * a.h - c * a.g * a.g.transpose();
  return r;
}

Jet pow(const Jet& a, int n) {
  Jet r(1.0);
  for (int k = 0; k < n; ++k) r = r * a;
  return r;
}

namespace {

Jet linear(const Vec3& row, const JetPoint& z, double shift) {
  Jet r(shift);
  for (int k = 0; k < 3; ++k) r = r + row[k] * z[k];
  return r;
}

Jet jet_scale(double s, const Jet& a) { return Jet(s) * a; }

JetMatrix congruence(const Mat3& L, const JetMatrix& M, const Mat3& R) {
  JetMatrix out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet acc;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double w = L(i, a) * R(b, j);
          if (w != 0.0) acc = acc + jet_scale(w, M[3 * a + b]);
        }
      out[3 * i + j] = acc;
    }
  return out;
}

Mat3 hessian_of(const Jet& f) { return f.h; }

Mat3 curl_of(const JetMatrix& M) {
  Mat3 c;
  for (int i = 0; i < 3; ++i) {
    const Jet& m1 = M[3 * i + 0];
    const Jet& m2 = M[3 * i + 1];
    const Jet& m3 = M[3 * i + 2];
    c(i, 0) = m3.g[1] - m2.g[2];
    c(i, 1) = m1.g[2] - m3.g[0];
    c(i, 2) = m2.g[0] - m1.g[1];
  }
  return c;
}

Vec3 div_of(const JetMatrix& M) {
  Vec3 d;
  for (int i = 0; i < 3; ++i) d[i] = M[3 * i].g[0] + M[3 * i + 1].g[1] + M[3 * i + 2].g[2];
  return d;
}

JetMatrix sine_matrix_pattern(const Jet& v, bool traceless) {
  JetMatrix m;
  if (!traceless) {
    m.fill(v);
    return m;
  }
  m.fill(Jet(0.0));
  m[0] = v;
  m[1] = v;
  m[2] = v;
  m[4] = v;
  m[8] = jet_scale(-2.0, v);
  return m;
}

} // namespace

PullbackTestFields quadratic_test_fields() {
  PullbackTestFields f;
  f.phi = [](const JetPoint& x) {
    return x[0] * x[0] + jet_scale(3.0, x[0] * x[1]) - jet_scale(2.0, x[1] * x[2]) + jet_scale(0.5, x[2] * x[2]) +
           x[0] - Jet(1.0);
  };
  f.sym = [](const JetPoint& x) {
    JetMatrix m;
    m[0] = x[0] * x[1];
    m[1] = m[3] = x[2] * x[2] + x[0];
    m[2] = m[6] = jet_scale(2.0, x[1]) - x[0] * x[2];
    m[4] = x[1] * x[1] - x[2];
    m[5] = m[7] = x[0] * x[0] + Jet(1.0);
    m[8] = x[0] * x[1] + x[1] * x[2];
    return m;
  };
  f.traceless = [](const JetPoint& x) {
    JetMatrix m;
    m[0] = x[0] * x[0];
    m[1] = x[1] * x[2];
    m[2] = x[0] - x[2];
    m[3] = x[2] * x[2];
    m[4] = jet_scale(2.0, x[0] * x[1]);
    m[5] = x[1];
    m[6] = x[0] * x[2];
    m[7] = Jet(3.0) - x[1] * x[1];
    m[8] = -(m[0] + m[4]);
    return m;
  };
  return f;
}

PullbackTestFields sine_test_fields(const AffineGeometry& geo) {
  const Mat3 K = geo.inverse_jacobian();
  const Vec3 shift = -K * geo.offset();
  auto param = [K, shift](const JetPoint& x) {
    JetPoint z;
    for (int i = 0; i < 3; ++i) z[i] = linear(K.row(i).transpose(), x, shift[i]);
    return z;
  };
  auto sine_power = [](const JetPoint& z, int n) {
    const double pi = std::numbers::pi;
    return pow(sin(jet_scale(pi, z[0])), n) * pow(sin(jet_scale(pi, z[1])), n) * pow(sin(jet_scale(pi, z[2])), n);
  };
  PullbackTestFields f;
  f.phi = [=](const JetPoint& x) { return sine_power(param(x), 4); };
  f.sym = [=](const JetPoint& x) { return sine_matrix_pattern(sine_power(param(x), 2), false); };
  f.traceless = [=](const JetPoint& x) { return sine_matrix_pattern(sine_power(param(x), 2), true); };
  return f;
}

PullbackResiduals verify_commuting_pullbacks(const AffineGeometry& geo, const PullbackTestFields& fields,
                                             int points_per_direction) {
  const GaussRule rule = gauss_legendre(points_per_direction);
  const Mat3& J = geo.jacobian();
  const Mat3& K = geo.inverse_jacobian();
  const double det = geo.det();

  double num[3] = {0, 0, 0}, den[3] = {0, 0, 0};
  for (int a = 0; a < points_per_direction; ++a)
    for (int b = 0; b < points_per_direction; ++b)
      for (int c = 0; c < points_per_direction; ++c) {
        const double w = rule.weights[a] * rule.weights[b] * rule.weights[c];
        const Vec3 zeta(rule.points[a], rule.points[b], rule.points[c]);
        const Vec3 x = geo.map(zeta);

        // Parametric route: differentiate the pulled-back field in zeta.
        JetPoint zj{Jet::variable(zeta[0], 0), Jet::variable(zeta[1], 1), Jet::variable(zeta[2], 2)};
        JetPoint xz;
        for (int i = 0; i < 3; ++i) xz[i] = linear(J.row(i).transpose(), zj, geo.offset()[i]);
        const Mat3 lhs_hess = hessian_of(fields.phi(xz));
        const Mat3 lhs_curl = curl_of(congruence(J.transpose(), fields.sym(xz), J));
        const Vec3 lhs_div = div_of(congruence(det * J.transpose(), fields.traceless(xz), K.transpose()));

        // Physical route: differentiate in x, then pull back.
        JetPoint xj{Jet::variable(x[0], 0), Jet::variable(x[1], 1), Jet::variable(x[2], 2)};
        const Mat3 rhs_hess = J.transpose() * hessian_of(fields.phi(xj)) * J;
        const Mat3 rhs_curl = det * J.transpose() * curl_of(fields.sym(xj)) * K.transpose();
        const Vec3 rhs_div = det * J.transpose() * div_of(fields.traceless(xj));

        num[0] += w * (lhs_hess - rhs_hess).squaredNorm();
        den[0] += w * rhs_hess.squaredNorm();
        num[1] += w * (lhs_curl - rhs_curl).squaredNorm();
        den[1] += w * rhs_curl.squaredNorm();
        num[2] += w * (lhs_div - rhs_div).squaredNorm();
        den[2] += w * rhs_div.squaredNorm();
      }
  auto rel = [](double n, double d) { return d > 0.0 ? std::sqrt(n / d) : std::sqrt(n); };
  return {rel(num[0], den[0]), rel(num[1], den[1]), rel(num[2], den[2])};
}

} // namespace hessiga
