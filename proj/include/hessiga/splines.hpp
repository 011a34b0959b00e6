#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <utility>
#include <vector>

namespace hessiga {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Open (p-open) knot sequence on [0, 1].
class KnotVector {
public:
  KnotVector(std::vector<double> values, int degree);

  int degree() const { return degree_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }

  /// Distinct knot values in increasing order.
  std::vector<double> breakpoints() const;
  /// Number of repetitions of an interior breakpoint value.
  int multiplicity(double value) const;

private:
  std::vector<double> values_;
  int degree_;
};

/// Breakpoints of a one-dimensional mesh.
struct Mesh1D {
  std::vector<double> breakpoints;

  int elements() const { return static_cast<int>(breakpoints.size()) - 1; }
  double element_size(int e) const { return breakpoints[e + 1] - breakpoints[e]; }
  /// Largest element size.
  double h() const;
};

/// Univariate spline space S_p^r over a p-open knot vector with uniform
/// interior multiplicity p - r. Basis indices are 0-based.
class SplineSpace {
public:
  SplineSpace(KnotVector knots, int regularity);

  int degree() const { return knots_.degree(); }
  int regularity() const { return regularity_; }
  int dim() const { return dim_; }
  int elements() const { return mesh_.elements(); }
  const KnotVector& knots() const { return knots_; }
  const Mesh1D& mesh() const { return mesh_; }

  /// Element containing x; elements are half-open, x = 1 belongs to the last one.
  int element_of(double x) const;
  /// Index of the first of the p+1 basis functions that are nonzero on an element.
  int first_active(int element) const { return spans_[element] - degree(); }

  /// Values and derivatives up to order nder of the p+1 functions active at x.
  /// out has shape (nder+1) x (p+1); column j belongs to basis first_active + j.
  /// Returns first_active for the element of x.
  int eval_active(double x, int nder, Eigen::Ref<Eigen::MatrixXd> out) const;

  /// Single basis function by the Cox-de Boor recursion (0/0 = 0).
  double basis(int i, double x) const;
  /// Derivative of a single basis function by the recursive two-term formula.
  double basis_derivative(int i, double x, int order) const;

  /// First and last element (inclusive) in the support of basis i.
  std::pair<int, int> support_elements(int i) const;
  Interval support(int i) const;
  /// Union of supports of the functions active on an element.
  Interval support_extension(int element) const;

  /// Coefficient map of d/dx into derivative_space(); shape (dim-1) x dim.
  SparseMatrix derivative_matrix() const;
  /// S_{p-1}^{r-1} on the same mesh.
  SplineSpace derivative_space() const;

  /// Greville abscissae: the coefficients of the identity function x.
  std::vector<double> greville() const;

  bool same_space(const SplineSpace& other) const;

private:
  double cox_de_boor(int j, int q, double x) const;
  double cox_de_boor_derivative(int j, int q, double x, int order) const;

  KnotVector knots_;
  int regularity_;
  int dim_;
  Mesh1D mesh_;
  std::vector<int> spans_;  // knot span index of each element
};

SplineSpace make_uniform_space(int p, int r, int N);

} // namespace hessiga
