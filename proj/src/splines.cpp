#include "hessiga/splines.hpp"

#include "hessiga/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hessiga {

KnotVector::KnotVector(std::vector<double> values, int degree)
    : values_(std::move(values)), degree_(degree) {
  if (degree_ < 0) throw ParameterError("knot vector degree must be nonnegative");
  const std::size_t p1 = static_cast<std::size_t>(degree_) + 1;
  if (values_.size() < 2 * p1) throw ParameterError("knot vector too short for its degree");
  for (std::size_t j = 0; j < p1; ++j) {
    if (values_[j] != 0.0 || values_[values_.size() - 1 - j] != 1.0)
      throw ParameterError("knot vector is not p-open on [0,1]");
  }
  for (std::size_t j = 1; j < values_.size(); ++j) {
    if (values_[j] < values_[j - 1]) throw ParameterError("knot vector must be nondecreasing");
  }
  for (double v : breakpoints()) {
    if (v > 0.0 && v < 1.0 && multiplicity(v) > degree_ + 1)
      throw ParameterError("interior knot multiplicity exceeds p+1");
  }
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> out;
  for (double v : values_) {
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

int KnotVector::multiplicity(double value) const {
  return static_cast<int>(std::count(values_.begin(), values_.end(), value));
}

double Mesh1D::h() const {
  double h = 0.0;
  for (int e = 0; e < elements(); ++e) h = std::max(h, element_size(e));
  return h;
}

SplineSpace::SplineSpace(KnotVector knots, int regularity)
    : knots_(std::move(knots)), regularity_(regularity) {
  const int p = knots_.degree();
  if (regularity_ < -1 || regularity_ > p - 1)
    throw ParameterError("regularity must satisfy -1 <= r <= p-1");
  mesh_.breakpoints = knots_.breakpoints();
  for (std::size_t b = 1; b + 1 < mesh_.breakpoints.size(); ++b) {
    if (knots_.multiplicity(mesh_.breakpoints[b]) != p - regularity_)
      throw ParameterError("interior multiplicity must equal p - r");
  }
  dim_ = static_cast<int>(knots_.size()) - p - 1;
  const auto& U = knots_.values();
  for (int e = 0; e < mesh_.elements(); ++e) {
    auto it = std::upper_bound(U.begin(), U.end(), mesh_.breakpoints[e]);
    spans_.push_back(static_cast<int>(it - U.begin()) - 1);
  }
}

int SplineSpace::element_of(double x) const {
  const auto& b = mesh_.breakpoints;
  if (x < b.front() || x > b.back()) throw ParameterError("evaluation point outside [0,1]");
  auto it = std::upper_bound(b.begin(), b.end(), x);
  int e = static_cast<int>(it - b.begin()) - 1;
  return std::min(e, elements() - 1);
}

int SplineSpace::eval_active(double x, int nder, Eigen::Ref<Eigen::MatrixXd> out) const {
  const int p = degree();
  if (nder < 0) throw ParameterError("derivative order must be nonnegative");
  if (out.rows() != nder + 1 || out.cols() != p + 1)
    throw ParameterError("output block has the wrong shape");
  const int span = spans_[element_of(x)];
  const auto& U = knots_.values();

  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[span + 1 - j];
    right[j] = U[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  out.setZero();
  for (int j = 0; j <= p; ++j) out(0, j) = ndu(j, p);

  const int kmax = std::min(nder, p);
  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a.setZero();
    a(0, 0) = 1.0;
    for (int k = 1; k <= kmax; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      out(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= kmax; ++k) {
    out.row(k) *= factor;
    factor *= (p - k);
  }
  return span - p;
}

double SplineSpace::cox_de_boor(int j, int q, double x) const {
  const auto& U = knots_.values();
  if (q == 0) {
    if (U[j] <= x && x < U[j + 1]) return 1.0;
    if (x == U.back() && j == spans_.back()) return 1.0;
    return 0.0;
  }
  double v = 0.0;
  const double a = U[j + q] - U[j];
  const double b = U[j + q + 1] - U[j + 1];
  if (a > 0.0) v += (x - U[j]) / a * cox_de_boor(j, q - 1, x);
  if (b > 0.0) v += (U[j + q + 1] - x) / b * cox_de_boor(j + 1, q - 1, x);
  return v;
}

double SplineSpace::cox_de_boor_derivative(int j, int q, double x, int order) const {
  if (order == 0) return cox_de_boor(j, q, x);
  const auto& U = knots_.values();
  double v = 0.0;
  const double a = U[j + q] - U[j];
  const double b = U[j + q + 1] - U[j + 1];
  if (a > 0.0) v += cox_de_boor_derivative(j, q - 1, x, order - 1) / a;
  if (b > 0.0) v -= cox_de_boor_derivative(j + 1, q - 1, x, order - 1) / b;
  return q * v;
}

double SplineSpace::basis(int i, double x) const {
  if (i < 0 || i >= dim_) throw ParameterError("basis index out of range");
  if (x < 0.0 || x > 1.0) throw ParameterError("evaluation point outside [0,1]");
  return cox_de_boor(i, degree(), x);
}

double SplineSpace::basis_derivative(int i, double x, int order) const {
  if (i < 0 || i >= dim_) throw ParameterError("basis index out of range");
  if (order < 0 || order > degree()) throw ParameterError("derivative order exceeds degree");
  if (x < 0.0 || x > 1.0) throw ParameterError("evaluation point outside [0,1]");
  return cox_de_boor_derivative(i, degree(), x, order);
}

std::pair<int, int> SplineSpace::support_elements(int i) const {
  if (i < 0 || i >= dim_) throw ParameterError("basis index out of range");
  const auto& b = mesh_.breakpoints;
  const double lo = knots_[i];
  const double hi = knots_[i + degree() + 1];
  const int first = static_cast<int>(std::lower_bound(b.begin(), b.end(), lo) - b.begin());
  const int last = static_cast<int>(std::lower_bound(b.begin(), b.end(), hi) - b.begin()) - 1;
  return {first, last};
}

Interval SplineSpace::support(int i) const {
  if (i < 0 || i >= dim_) throw ParameterError("basis index out of range");
  return {knots_[i], knots_[i + degree() + 1]};
}

Interval SplineSpace::support_extension(int element) const {
  if (element < 0 || element >= elements()) throw ParameterError("element index out of range");
  const int span = spans_[element];
  const int p = degree();
  return {std::max(0.0, knots_[span - p]), std::min(1.0, knots_[span + p + 1])};
}

SparseMatrix SplineSpace::derivative_matrix() const {
  const int p = degree();
  if (p == 0) throw ParameterError("derivative matrix needs degree >= 1");
  if (regularity_ < 0) throw ParameterError("derivative matrix needs regularity >= 0");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * (dim_ - 1));
  for (int j = 0; j + 1 < dim_; ++j) {
    const double c = p / (knots_[j + p + 1] - knots_[j + 1]);
    trips.emplace_back(j, j, -c);
    trips.emplace_back(j, j + 1, c);
  }
  SparseMatrix E(dim_ - 1, dim_);
  E.setFromTriplets(trips.begin(), trips.end());
  return E;
}

SplineSpace SplineSpace::derivative_space() const {
  if (degree() == 0 || regularity_ < 0)
    throw ParameterError("derivative space needs p >= 1 and r >= 0");
  const auto& U = knots_.values();
  std::vector<double> inner(U.begin() + 1, U.end() - 1);
  return SplineSpace(KnotVector(std::move(inner), degree() - 1), regularity_ - 1);
}

std::vector<double> SplineSpace::greville() const {
  const int p = degree();
  std::vector<double> g(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (p == 0) {
      g[i] = 0.5 * (knots_[i] + knots_[i + 1]);
      continue;
    }
    double s = 0.0;
    for (int k = 1; k <= p; ++k) s += knots_[i + k];
    g[i] = s / p;
  }
  return g;
}

bool SplineSpace::same_space(const SplineSpace& other) const {
  return degree() == other.degree() && knots_.values() == other.knots_.values();
}

SplineSpace make_uniform_space(int p, int r, int N) {
  if (p < 0) throw ParameterError("degree must be nonnegative");
  if (r < -1 || r > p - 1)
    throw ParameterError("invalid (p, r) = (" + std::to_string(p) + ", " + std::to_string(r) + ")");
  if (N < 1) throw ParameterError("element count must be positive");
  std::vector<double> knots(p + 1, 0.0);
  for (int e = 1; e < N; ++e) knots.insert(knots.end(), p - r, static_cast<double>(e) / N);
  knots.insert(knots.end(), p + 1, 1.0);
  return SplineSpace(KnotVector(std::move(knots), p), r);
}

} // namespace hessiga
