#pragma once

#include "hessiga/analytic.hpp"
#include "hessiga/complex.hpp"
#include "hessiga/quadrature.hpp"

#include <vector>

namespace hessiga {

/// Values (order 0) or derivatives of every basis function at the points: points x dim.
Eigen::MatrixXd basis_matrix(const SplineSpace& space, const std::vector<double>& points, int order);

/// Parametric operator outputs of a discrete field on a tensor grid (one vector per output component).
std::vector<Eigen::VectorXd> evaluate_components(const FieldLayout& layout, const Eigen::VectorXd& coeffs,
                                                 const DiffOperator& op, const GridAxes& axes);

/// Physical entries from parametric components by the pushforward of a level.
std::vector<Eigen::VectorXd> push_entries(int level, const AffineGeometry& geo,
                                          const std::vector<Eigen::VectorXd>& components);

/// A physical field that can be sampled on a tensor grid of parametric points.
class GridField {
public:
  virtual ~GridField() = default;
  virtual int entries() const = 0;
  virtual std::vector<Eigen::VectorXd> sample(const GridAxes& axes) const = 0;
};

class AnalyticGridField : public GridField {
public:
  explicit AnalyticGridField(AnalyticField field) : field_(std::move(field)) {}
  int entries() const override { return static_cast<int>(field_.entries.size()); }
  std::vector<Eigen::VectorXd> sample(const GridAxes& axes) const override;

private:
  AnalyticField field_;
};

/// Discrete field of a layout, optionally through a parametric operator whose output lives on out_level.
class DiscreteGridField : public GridField {
public:
  DiscreteGridField(const FieldLayout& layout, Eigen::VectorXd coeffs, const AffineGeometry& geo);
  DiscreteGridField(const FieldLayout& layout, Eigen::VectorXd coeffs, const AffineGeometry& geo, DiffOperator op,
                    int out_level);

  int entries() const override;
  std::vector<Eigen::VectorXd> sample(const GridAxes& axes) const override;

private:
  const FieldLayout* layout_;
  Eigen::VectorXd coeffs_;
  AffineGeometry geo_;
  DiffOperator op_;
  int out_level_;
};

/// Tensor Gauss grid aligned with the elements of [0,1]^3.
struct ErrorQuadrature {
  GridAxes axes;
  std::array<Eigen::VectorXd, 3> weights;
};

ErrorQuadrature error_quadrature(int N, int q);
/// Quadrature points per element used for error norms when none are given.
int default_error_points(int p);

/// L2 norm over the physical domain of a - b (b may be null).
double l2_distance(const GridField& a, const GridField* b, const ErrorQuadrature& quad, const AffineGeometry& geo);

} // namespace hessiga
