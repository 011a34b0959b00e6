#include "hessiga/analytic.hpp"

#include "hessiga/errors.hpp"
#include "hessiga/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace hessiga {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDropTolerance = 0.0;

using UniExpr = std::map<Factor, double>;

void add_canonical(UniExpr& out, Factor f, double coef) {
  if (coef == 0.0) return;
  // cos^2 = 1 - sin^2 keeps the cosine power in {0, 1}.
  if (f.c >= 2) {
    add_canonical(out, Factor{f.s, f.c - 2, f.m}, coef);
    add_canonical(out, Factor{f.s + 2, f.c - 2, f.m}, -coef);
    return;
  }
  out[f] += coef;
}

UniExpr differentiate(const Factor& f) {
  UniExpr out;
  if (f.s > 0) add_canonical(out, Factor{f.s - 1, f.c + 1, f.m}, kPi * f.s);
  if (f.c > 0) add_canonical(out, Factor{f.s + 1, f.c - 1, f.m}, -kPi * f.c);
  if (f.m > 0) add_canonical(out, Factor{f.s, f.c, f.m - 1}, static_cast<double>(f.m));
  return out;
}

Factor multiply_raw(const Factor& a, const Factor& b) { return Factor{a.s + b.s, a.c + b.c, a.m + b.m}; }

} // namespace

double Factor::operator()(double t) const {
  double v = 1.0;
  if (s) v *= std::pow(std::sin(kPi * t), s);
  if (c) v *= std::pow(std::cos(kPi * t), c);
  if (m) v *= std::pow(t, m);
  return v;
}

void SeparableScalar::add_term(const Key& key, double coef) {
  if (coef == 0.0) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, coef);
    return;
  }
  it->second += coef;
  if (std::abs(it->second) <= kDropTolerance) terms_.erase(it);
}

SeparableScalar SeparableScalar::constant(double value) {
  SeparableScalar f;
  f.add_term(Key{}, value);
  return f;
}

SeparableScalar SeparableScalar::term(double coef, const Factor& f1, const Factor& f2, const Factor& f3) {
  SeparableScalar out;
  UniExpr e1, e2, e3;
  add_canonical(e1, f1, 1.0);
  add_canonical(e2, f2, 1.0);
  add_canonical(e3, f3, 1.0);
  for (const auto& [a, ca] : e1)
    for (const auto& [b, cb] : e2)
      for (const auto& [c, cc] : e3) out.add_term(Key{a, b, c}, coef * ca * cb * cc);
  return out;
}

SeparableScalar SeparableScalar::monomial(double coef, int m1, int m2, int m3) {
  return term(coef, Factor{0, 0, m1}, Factor{0, 0, m2}, Factor{0, 0, m3});
}

SeparableScalar SeparableScalar::sine_product(int n) {
  return term(1.0, Factor{n, 0, 0}, Factor{n, 0, 0}, Factor{n, 0, 0});
}

SeparableScalar SeparableScalar::linear(const Vec3& row, double shift) {
  SeparableScalar f = constant(shift);
  f += monomial(row[0], 1, 0, 0);
  f += monomial(row[1], 0, 1, 0);
  f += monomial(row[2], 0, 0, 1);
  return f;
}

SeparableScalar SeparableScalar::derivative(int axis) const {
  if (axis < 0 || axis > 2) throw ParameterError("axis out of range");
  SeparableScalar out;
  for (const auto& [key, coef] : terms_) {
    for (const auto& [f, c] : differentiate(key[axis])) {
      Key k = key;
      k[axis] = f;
      out.add_term(k, coef * c);
    }
  }
  return out;
}

SeparableScalar SeparableScalar::derivative(const std::array<int, 3>& alpha) const {
  SeparableScalar out = *this;
  for (int a = 0; a < 3; ++a) {
    if (alpha[a] < 0) throw ParameterError("negative derivative order");
    for (int k = 0; k < alpha[a]; ++k) out = out.derivative(a);
  }
  return out;
}

double SeparableScalar::operator()(const Vec3& z) const {
  double v = 0.0;
  for (const auto& [key, coef] : terms_) v += coef * key[0](z[0]) * key[1](z[1]) * key[2](z[2]);
  return v;
}

Eigen::VectorXd SeparableScalar::evaluate_grid(const GridAxes& axes) const {
  const Eigen::Index n1 = axes[0].size(), n2 = axes[1].size(), n3 = axes[2].size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n1 * n2 * n3);
  if (terms_.empty()) return out;

  std::array<std::map<Factor, Eigen::VectorXd>, 3> cache;
  auto values = [&](int axis, const Factor& f) -> const Eigen::VectorXd& {
    auto it = cache[axis].find(f);
    if (it != cache[axis].end()) return it->second;
    Eigen::VectorXd v(axes[axis].size());
    for (std::size_t i = 0; i < axes[axis].size(); ++i) v[i] = f(axes[axis][i]);
    return cache[axis].emplace(f, std::move(v)).first->second;
  };

  // Sum factorization over the ordered keys: group by the first factor, then the second.
  auto it = terms_.begin();
  Eigen::Map<Eigen::MatrixXd> grid(out.data(), n2 * n3, n1);
  while (it != terms_.end()) {
    const Factor f1 = it->first[0];
    Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(n3, n2);
    while (it != terms_.end() && it->first[0] == f1) {
      const Factor f2 = it->first[1];
      Eigen::VectorXd line = Eigen::VectorXd::Zero(n3);
      while (it != terms_.end() && it->first[0] == f1 && it->first[1] == f2) {
        line += it->second * values(2, it->first[2]);
        ++it;
      }
      inner += line * values(1, f2).transpose();
    }
    const Eigen::Map<const Eigen::VectorXd> flat(inner.data(), n2 * n3);
    grid += flat * values(0, f1).transpose();
  }
  return out;
}

SeparableScalar& SeparableScalar::operator+=(const SeparableScalar& other) {
  for (const auto& [key, coef] : other.terms_) add_term(key, coef);
  return *this;
}

SeparableScalar& SeparableScalar::operator-=(const SeparableScalar& other) {
  for (const auto& [key, coef] : other.terms_) add_term(key, -coef);
  return *this;
}

SeparableScalar& SeparableScalar::operator*=(double a) {
  if (a == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, coef] : terms_) coef *= a;
  return *this;
}

SeparableScalar operator*(const SeparableScalar& a, const SeparableScalar& b) {
  SeparableScalar out;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      out += SeparableScalar::term(ca * cb, multiply_raw(ka[0], kb[0]), multiply_raw(ka[1], kb[1]),
                                   multiply_raw(ka[2], kb[2]));
    }
  return out;
}

double integrate_unit_cube(const SeparableScalar& f) {
  static const ElementQuadrature rule = [] {
    Mesh1D mesh;
    for (int i = 0; i <= 8; ++i) mesh.breakpoints.push_back(i / 8.0);
    return element_quadrature(mesh, 16);
  }();
  std::map<Factor, double> cache;
  auto integral = [&](const Factor& fac) {
    auto it = cache.find(fac);
    if (it != cache.end()) return it->second;
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * fac(rule.points[q]);
    cache.emplace(fac, s);
    return s;
  };
  double total = 0.0;
  for (const auto& [key, coef] : f.terms()) total += coef * integral(key[0]) * integral(key[1]) * integral(key[2]);
  return total;
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

int level_entries(int level) {
  switch (level) {
  case 0:
  case 1: return 1;
  case 2:
  case 3: return 9;
  case 4: return 3;
  default: throw ParameterError("level out of range");
  }
}

AnalyticField AnalyticField::scalar(const ScalarExpr& f, int level) {
  if (level != 0 && level != 1) throw ParameterError("scalar fields live on level 0 or 1");
  return AnalyticField{level, {f}};
}

AnalyticField AnalyticField::matrix(const MatrixExpr& m, int level) {
  if (level != 2 && level != 3) throw ParameterError("matrix fields live on level 2 or 3");
  return AnalyticField{level, std::vector<SeparableScalar>(m.begin(), m.end())};
}

AnalyticField AnalyticField::vector(const VectorExpr& v) {
  return AnalyticField{4, std::vector<SeparableScalar>(v.begin(), v.end())};
}

AnalyticField AnalyticField::zero(int level) {
  return AnalyticField{level, std::vector<SeparableScalar>(level_entries(level))};
}

ScalarExpr AnalyticField::as_scalar() const {
  if (entries.size() != 1) throw ParameterError("field is not scalar");
  return entries[0];
}

MatrixExpr AnalyticField::as_matrix() const {
  if (entries.size() != 9) throw ParameterError("field is not matrix-valued");
  MatrixExpr m;
  std::copy(entries.begin(), entries.end(), m.begin());
  return m;
}

VectorExpr AnalyticField::as_vector() const {
  if (entries.size() != 3) throw ParameterError("field is not vector-valued");
  return {entries[0], entries[1], entries[2]};
}

std::vector<double> AnalyticField::values(const Vec3& z) const {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(e(z));
  return v;
}

ScalarExpr Calculus::d(const ScalarExpr& f, int a) const {
  ScalarExpr out;
  for (int b = 0; b < 3; ++b) {
    if (K_(b, a) != 0.0) out += K_(b, a) * f.derivative(b);
  }
  return out;
}

VectorExpr Calculus::grad(const ScalarExpr& f) const { return {d(f, 0), d(f, 1), d(f, 2)}; }

MatrixExpr Calculus::hessian(const ScalarExpr& f) const {
  const VectorExpr g = grad(f);
  MatrixExpr h;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) h[3 * i + j] = h[3 * j + i] = d(g[i], j);
  return h;
}

MatrixExpr Calculus::curl(const MatrixExpr& m) const {
  MatrixExpr out;
  for (int i = 0; i < 3; ++i) {
    const ScalarExpr& m1 = m[3 * i];
    const ScalarExpr& m2 = m[3 * i + 1];
    const ScalarExpr& m3 = m[3 * i + 2];
    out[3 * i] = d(m3, 1) - d(m2, 2);
    out[3 * i + 1] = d(m1, 2) - d(m3, 0);
    out[3 * i + 2] = d(m2, 0) - d(m1, 1);
  }
  return out;
}

VectorExpr Calculus::div(const MatrixExpr& m) const {
  VectorExpr out;
  for (int i = 0; i < 3; ++i) out[i] = d(m[3 * i], 0) + d(m[3 * i + 1], 1) + d(m[3 * i + 2], 2);
  return out;
}

ScalarExpr Calculus::div(const VectorExpr& v) const { return d(v[0], 0) + d(v[1], 1) + d(v[2], 2); }

ScalarExpr Calculus::divdiv(const MatrixExpr& m) const { return div(div(m)); }

MatrixExpr Calculus::grad(const VectorExpr& v) const {
  MatrixExpr out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = d(v[i], j);
  return out;
}

MatrixExpr sym(const MatrixExpr& m) {
  MatrixExpr out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = 0.5 * (m[3 * i + j] + m[3 * j + i]);
  return out;
}

MatrixExpr transpose(const MatrixExpr& m) {
  MatrixExpr out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = m[3 * j + i];
  return out;
}

ScalarExpr trace(const MatrixExpr& m) { return m[0] + m[4] + m[8]; }

MatrixExpr dev(const MatrixExpr& m) {
  MatrixExpr out = m;
  const ScalarExpr third = (1.0 / 3.0) * trace(m);
  for (int i = 0; i < 3; ++i) out[4 * i] -= third;
  return out;
}

ScalarExpr project_p1(const ScalarExpr& phi, const AffineGeometry& geo) {
  std::array<ScalarExpr, 4> basis;
  basis[0] = ScalarExpr::constant(1.0);
  for (int a = 0; a < 3; ++a) basis[a + 1] = ScalarExpr::linear(geo.jacobian().row(a).transpose(), geo.offset()[a]);
  Eigen::Matrix4d gram;
  Eigen::Vector4d moments;
  for (int i = 0; i < 4; ++i) {
    moments[i] = integrate_unit_cube(phi * basis[i]);
    for (int j = 0; j < 4; ++j) gram(i, j) = integrate_unit_cube(basis[i] * basis[j]);
  }
  const Eigen::Vector4d c = gram.ldlt().solve(moments);
  ScalarExpr out;
  for (int i = 0; i < 4; ++i) out += c[i] * basis[i];
  return out;
}

AnalyticField apply_d(const AnalyticField& u, const AffineGeometry& geo) {
  const Calculus calc(geo);
  switch (u.level) {
  case 0: return AnalyticField::scalar(u.as_scalar(), 1);
  case 1: return AnalyticField::matrix(calc.hessian(u.as_scalar()), 2);
  case 2: return AnalyticField::matrix(calc.curl(u.as_matrix()), 3);
  case 3: return AnalyticField::vector(calc.div(u.as_matrix()));
  default: throw ParameterError("exterior derivative defined for levels 0..3");
  }
}

AnalyticField dual_solution(int k, const AnalyticField& u, const AffineGeometry& geo) {
  if (u.level != k) throw ParameterError("field level does not match k");
  const Calculus calc(geo);
  switch (k) {
  case 1: return AnalyticField::scalar(project_p1(u.as_scalar(), geo), 0);
  case 2: return AnalyticField::scalar(calc.divdiv(u.as_matrix()), 1);
  case 3: return AnalyticField::matrix(sym(calc.curl(u.as_matrix())), 2);
  case 4: {
    MatrixExpr t = dev(calc.grad(u.as_vector()));
    for (auto& e : t) e *= -1.0;
    return AnalyticField::matrix(t, 3);
  }
  default: throw ParameterError("level k must be in 1..4");
  }
}

AnalyticField hodge_rhs(int k, const AnalyticField& u, const AffineGeometry& geo) {
  if (k < 1 || k > 4) throw ParameterError("level k must be in 1..4");
  if (u.level != k) throw ParameterError("field level does not match k");
  const Calculus calc(geo);
  switch (k) {
  case 1: {
    const ScalarExpr phi = u.as_scalar();
    return AnalyticField::scalar(project_p1(phi, geo) + calc.divdiv(calc.hessian(phi)), 1);
  }
  case 2: {
    const MatrixExpr S = u.as_matrix();
    const MatrixExpr a = sym(calc.curl(calc.curl(S)));
    const MatrixExpr b = calc.hessian(calc.divdiv(S));
    MatrixExpr f;
    for (int i = 0; i < 9; ++i) f[i] = a[i] + b[i];
    return AnalyticField::matrix(f, 2);
  }
  case 3: {
    const MatrixExpr T = u.as_matrix();
    const MatrixExpr a = dev(calc.grad(calc.div(T)));
    const MatrixExpr b = calc.curl(sym(calc.curl(T)));
    MatrixExpr f;
    for (int i = 0; i < 9; ++i) f[i] = b[i] - a[i];
    return AnalyticField::matrix(f, 3);
  }
  default: {
    VectorExpr f = calc.div(dev(calc.grad(u.as_vector())));
    for (auto& e : f) e *= -1.0;
    return AnalyticField::vector(f);
  }
  }
}

} // namespace hessiga
