#pragma once

#include "hessiga/geometry.hpp"
#include "hessiga/splines.hpp"
#include "hessiga/tensor.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace hessiga {

/// Tensor product of three univariate spline spaces.
struct ComponentSpace {
  std::array<SplineSpace, 3> axes;

  Dims3 dims() const { return {axes[0].dim(), axes[1].dim(), axes[2].dim()}; }
  int size() const { return axes[0].dim() * axes[1].dim() * axes[2].dim(); }
  bool same_space(const ComponentSpace& other) const;
};

/// Coefficient layout of one level: component-major, then i3 fastest.
/// Level 0 is P1 with the physical basis {1, x, y, z} and has no spline components.
class FieldLayout {
public:
  FieldLayout(int level, std::vector<ComponentSpace> components);
  static FieldLayout p1();

  int level() const { return level_; }
  PullbackKind kind() const;
  int components() const { return static_cast<int>(components_.size()); }
  const ComponentSpace& component(int c) const { return components_[c]; }
  int offset(int c) const { return offsets_[c]; }
  int size() const { return size_; }

private:
  int level_;
  std::vector<ComponentSpace> components_;
  std::vector<int> offsets_;
  int size_;
};

/// Per-direction degree drops (0, 1 or 2 below p) of every component of a level.
std::vector<std::array<int, 3>> component_pattern(int level);
std::string component_name(int level, int c);

/// The five discrete spaces of the spline Hessian complex.
class ComplexSpaces {
public:
  ComplexSpaces(int p, int r, int N);

  int degree() const { return p_; }
  int regularity() const { return r_; }
  int elements() const { return N_; }
  const FieldLayout& level(int k) const;
  /// S_{p-drop}^{r-drop} on the common mesh.
  const SplineSpace& base(int drop) const { return base_[drop]; }
  int total_dofs() const;

private:
  int p_, r_, N_;
  std::vector<SplineSpace> base_;
  std::vector<FieldLayout> levels_;
};

ComplexSpaces build_complex(int p, int r, int N);

/// Layout with every component in S_p^r in each direction.
FieldLayout naive_layout(int level, int p, int r, int N);

/// One term coef * d^order(input component) contributing to an output component.
struct DiffTerm {
  int out = 0;
  int in = 0;
  std::array<int, 3> order{0, 0, 0};
  double coef = 1.0;
};

/// Parametric differential operator between stored components.
struct DiffOperator {
  int in_components = 0;
  int out_components = 0;
  std::vector<DiffTerm> terms;
};

DiffOperator identity_operator(int components);
DiffOperator hessian_operator();
DiffOperator curl_operator();
DiffOperator div_operator();
/// d^k from level k to level k+1 for k = 1, 2, 3.
DiffOperator level_operator(int k);

/// Coefficient map of an operator between two layouts; throws if a term leaves the target space.
SparseMatrix differential_matrix(const DiffOperator& op, const FieldLayout& source, const FieldLayout& target);
SparseMatrix hessian_matrix(const ComplexSpaces& spaces);
SparseMatrix curl_matrix(const ComplexSpaces& spaces);
SparseMatrix div_matrix(const ComplexSpaces& spaces);
/// Level-0 embedding of {1, x, y, z} into level 1.
SparseMatrix p1_embedding(const ComplexSpaces& spaces, const AffineGeometry& geo);

struct ExactnessReport {
  bool checked = false;
  std::string message;
  std::array<int, 4> dims{};
  std::array<int, 3> ranks{};
  int kernel_d1 = 0;
  int defect_level2 = 0;  // dim ker D2 - rank D1
  int defect_level3 = 0;  // dim ker D3 - rank D2
  int defect_level4 = 0;  // dim V4 - rank D3

  bool exact() const {
    return checked && kernel_d1 == 4 && defect_level2 == 0 && defect_level3 == 0 && defect_level4 == 0;
  }
};

/// Singular values (descending) of a dense copy of a sparse matrix.
Eigen::VectorXd singular_values(const SparseMatrix& A);
int numerical_rank(const Eigen::VectorXd& sigma, double relative_threshold = 1e-9);

/// Dense-rank exactness check; refuses matrices with more than max_unknowns rows or columns.
ExactnessReport verify_exactness(const ComplexSpaces& spaces, int max_unknowns = 3000);

/// Max |entry| of a product normalized by the product of the factor max-norms.
double scaled_product_norm(const SparseMatrix& second, const SparseMatrix& first);

/// Matrix Market coordinate export.
void export_coordinates(std::ostream& os, const SparseMatrix& A);

} // namespace hessiga
