#include "hessiga/quadrature.hpp"

#include "hessiga/errors.hpp"

#include <gsl/gsl_integration.h>

#include <memory>

namespace hessiga {

GaussRule gauss_legendre(int q, double a, double b) {
  if (q < 1) throw ParameterError("quadrature needs at least one point");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(q)), &gsl_integration_glfixed_table_free);
  if (!table) throw ConstructionError("Gauss-Legendre table allocation failed");
  GaussRule rule;
  rule.points.resize(q);
  rule.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    gsl_integration_glfixed_point(a, b, static_cast<size_t>(i), &rule.points[i], &rule.weights[i], table.get());
  }
  return rule;
}

ElementQuadrature element_quadrature(const Mesh1D& mesh, int q) {
  ElementQuadrature out;
  out.per_element = q;
  for (int e = 0; e < mesh.elements(); ++e) {
    const GaussRule rule = gauss_legendre(q, mesh.breakpoints[e], mesh.breakpoints[e + 1]);
    out.points.insert(out.points.end(), rule.points.begin(), rule.points.end());
    out.weights.insert(out.weights.end(), rule.weights.begin(), rule.weights.end());
    out.element.insert(out.element.end(), q, e);
  }
  return out;
}

} // namespace hessiga
