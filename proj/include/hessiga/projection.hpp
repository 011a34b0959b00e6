#pragma once

#include "hessiga/analytic.hpp"
#include "hessiga/complex.hpp"
#include "hessiga/quadrature.hpp"

#include <functional>
#include <vector>

namespace hessiga {

/// Plain projection onto S_p^r, or the once / twice differentiated variants
/// onto S_{p-1}^{r-1} and S_{p-2}^{r-2}.
enum class ProjectorKind { Plain = 0, C1 = 1, C2 = 2 };

/// Sampling nodes per element used by the projectors when none are given.
int default_projection_nodes(int p);

/// Local L2-dual functionals: lambda_i uses samples on supp B_i only.
class DualFunctionals {
public:
  DualFunctionals(const SplineSpace& space, int nodes_per_element);

  const SplineSpace& space() const { return space_; }
  const ElementQuadrature& nodes() const { return nodes_; }
  /// dim x (#nodes) map from samples to coefficients.
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& samples) const { return matrix_ * samples; }
  Eigen::VectorXd apply(const std::function<double(double)>& f) const;

private:
  SplineSpace space_;
  ElementQuadrature nodes_;
  Eigen::MatrixXd matrix_;
};

DualFunctionals build_dual_functionals(const SplineSpace& space, int nodes_per_element = 0);

/// Sample-to-coefficient matrices for the antiderivative and the double antiderivative
/// (v -> int_0^x v and v -> int_0^x (x-s) v(s) ds) on the per-element nodes.
Eigen::MatrixXd antiderivative_matrix(const ElementQuadrature& nodes, const Mesh1D& mesh, int times);

class UnivariateProjector {
public:
  UnivariateProjector(ProjectorKind kind, const SplineSpace& base, int nodes_per_element = 0);

  ProjectorKind kind() const { return kind_; }
  const SplineSpace& base() const { return base_; }
  const SplineSpace& target() const { return target_; }
  const ElementQuadrature& nodes() const { return nodes_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& samples) const { return matrix_ * samples; }
  Eigen::VectorXd project(const std::function<double(double)>& f) const;

private:
  ProjectorKind kind_;
  SplineSpace base_;
  SplineSpace target_;
  ElementQuadrature nodes_;
  Eigen::MatrixXd matrix_;
};

/// Tensor-product projector onto a level of the parametric complex.
class TensorProjector {
public:
  TensorProjector(int level, const ComplexSpaces& spaces, int nodes_per_element = 0);

  int level() const { return level_; }
  std::array<ProjectorKind, 3> kinds(int component) const;
  /// The node grid on which component samples are expected.
  const GridAxes& axes() const { return axes_; }

  /// Samples of every parametric component on axes(), last axis fastest.
  Eigen::VectorXd project_samples(const std::vector<Eigen::VectorXd>& samples) const;
  Eigen::VectorXd project(const std::vector<SeparableScalar>& components) const;
  Eigen::VectorXd project(const std::function<void(const Vec3&, double*)>& pointwise) const;

private:
  int level_;
  FieldLayout layout_;
  std::vector<std::array<int, 3>> pattern_;
  std::array<Eigen::MatrixXd, 3> matrices_;
  GridAxes axes_;
};

/// Parametric components (pullback) of a physical analytic field.
std::vector<SeparableScalar> parametric_components(const AnalyticField& field, const AffineGeometry& geo);

/// Projection of a physical field: pull back, project, keep the coefficients.
Eigen::VectorXd physical_project(int level, const ComplexSpaces& spaces, const AffineGeometry& geo,
                                 const AnalyticField& field, int nodes_per_element = 0);

} // namespace hessiga
