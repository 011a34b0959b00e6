#pragma once

#include "hessiga/splines.hpp"

#include <vector>

namespace hessiga {

/// Gauss-Legendre rule; exact for polynomials of degree <= 2q-1.
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int q, double a = 0.0, double b = 1.0);

/// q Gauss points on every element of a mesh, element-major.
struct ElementQuadrature {
  int per_element = 0;
  std::vector<double> points;
  std::vector<double> weights;
  std::vector<int> element;

  int size() const { return static_cast<int>(points.size()); }
};

ElementQuadrature element_quadrature(const Mesh1D& mesh, int q);

} // namespace hessiga
