#include "hessiga/fields.hpp"

#include "hessiga/errors.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace hessiga {

Eigen::MatrixXd basis_matrix(const SplineSpace& space, const std::vector<double>& points, int order) {
  const int p = space.degree();
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points.size()), space.dim());
  Eigen::MatrixXd vals(order + 1, p + 1);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const int first = space.eval_active(points[k], order, vals);
    V.block(static_cast<Eigen::Index>(k), first, 1, p + 1) = vals.row(order);
  }
  return V;
}

std::vector<Eigen::VectorXd> evaluate_components(const FieldLayout& layout, const Eigen::VectorXd& coeffs,
                                                 const DiffOperator& op, const GridAxes& axes) {
  if (coeffs.size() != layout.size()) throw ParameterError("coefficient vector does not match the layout");
  if (op.in_components != layout.components()) throw ParameterError("operator does not match the layout");
  const Eigen::Index npts = static_cast<Eigen::Index>(axes[0].size() * axes[1].size() * axes[2].size());
  std::vector<Eigen::VectorXd> out(op.out_components, Eigen::VectorXd::Zero(npts));

  using Key = std::tuple<int, int, int, int>;  // axis, degree, regularity, order
  std::map<Key, Eigen::MatrixXd> cache;
  auto matrix = [&](int axis, const SplineSpace& s, int order) -> const Eigen::MatrixXd& {
    const Key key{axis, s.degree(), s.regularity(), order};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, basis_matrix(s, axes[axis], order)).first;
    return it->second;
  };

  for (const auto& t : op.terms) {
    const ComponentSpace& cs = layout.component(t.in);
    const Eigen::VectorXd block = coeffs.segment(layout.offset(t.in), cs.size());
    out[t.out] += t.coef * kron_apply(matrix(0, cs.axes[0], t.order[0]), matrix(1, cs.axes[1], t.order[1]),
                                      matrix(2, cs.axes[2], t.order[2]), block);
  }
  return out;
}

std::vector<Eigen::VectorXd> push_entries(int level, const AffineGeometry& geo,
                                          const std::vector<Eigen::VectorXd>& components) {
  const Eigen::MatrixXd G = pushforward_matrix(static_cast<PullbackKind>(level), geo);
  if (static_cast<Eigen::Index>(components.size()) != G.cols()) throw ParameterError("component count mismatch");
  std::vector<Eigen::VectorXd> entries(G.rows(), Eigen::VectorXd::Zero(components.empty() ? 0 : components[0].size()));
  for (int e = 0; e < G.rows(); ++e)
    for (int c = 0; c < G.cols(); ++c)
      if (G(e, c) != 0.0) entries[e] += G(e, c) * components[c];
  return entries;
}

std::vector<Eigen::VectorXd> AnalyticGridField::sample(const GridAxes& axes) const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(field_.entries.size());
  for (const auto& e : field_.entries) out.push_back(e.evaluate_grid(axes));
  return out;
}

DiscreteGridField::DiscreteGridField(const FieldLayout& layout, Eigen::VectorXd coeffs, const AffineGeometry& geo)
    : layout_(&layout), coeffs_(std::move(coeffs)), geo_(geo), out_level_(layout.level()) {
  if (layout.level() > 0) op_ = identity_operator(layout.components());
  if (coeffs_.size() != layout.size()) throw ParameterError("coefficient vector does not match the layout");
}

DiscreteGridField::DiscreteGridField(const FieldLayout& layout, Eigen::VectorXd coeffs, const AffineGeometry& geo,
                                     DiffOperator op, int out_level)
    : layout_(&layout), coeffs_(std::move(coeffs)), geo_(geo), op_(std::move(op)), out_level_(out_level) {
  if (layout.level() == 0) throw ParameterError("level 0 fields carry no operator");
  if (coeffs_.size() != layout.size()) throw ParameterError("coefficient vector does not match the layout");
}

int DiscreteGridField::entries() const { return level_entries(out_level_); }

std::vector<Eigen::VectorXd> DiscreteGridField::sample(const GridAxes& axes) const {
  if (layout_->level() == 0) {
    const Dims3 n{static_cast<int>(axes[0].size()), static_cast<int>(axes[1].size()), static_cast<int>(axes[2].size())};
    Eigen::VectorXd v(n[0] * n[1] * n[2]);
    for (int i1 = 0; i1 < n[0]; ++i1)
      for (int i2 = 0; i2 < n[1]; ++i2)
        for (int i3 = 0; i3 < n[2]; ++i3) {
          const Vec3 x = geo_.map(Vec3(axes[0][i1], axes[1][i2], axes[2][i3]));
          v[flat_index(n, i1, i2, i3)] = coeffs_[0] + coeffs_.tail<3>().dot(x);
        }
    return {v};
  }
  return push_entries(out_level_, geo_, evaluate_components(*layout_, coeffs_, op_, axes));
}

ErrorQuadrature error_quadrature(int N, int q) {
  if (N < 1 || q < 1) throw ParameterError("error quadrature needs N >= 1 and q >= 1");
  Mesh1D mesh;
  for (int e = 0; e <= N; ++e) mesh.breakpoints.push_back(static_cast<double>(e) / N);
  const ElementQuadrature rule = element_quadrature(mesh, q);
  ErrorQuadrature quad;
  for (int d = 0; d < 3; ++d) {
    quad.axes[d] = rule.points;
    quad.weights[d] = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  }
  return quad;
}

int default_error_points(int p) { return p + 6; }

double l2_distance(const GridField& a, const GridField* b, const ErrorQuadrature& quad, const AffineGeometry& geo) {
  const auto va = a.sample(quad.axes);
  std::vector<Eigen::VectorXd> vb;
  if (b) {
    if (b->entries() != a.entries()) throw ParameterError("fields have different shapes");
    vb = b->sample(quad.axes);
  }
  const Eigen::Index n1 = quad.weights[0].size(), n2 = quad.weights[1].size(), n3 = quad.weights[2].size();
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(n1 * n2 * n3);
  for (std::size_t e = 0; e < va.size(); ++e) {
    if (b) sq += (va[e] - vb[e]).cwiseAbs2();
    else sq += va[e].cwiseAbs2();
  }
  double total = 0.0;
  for (Eigen::Index i1 = 0; i1 < n1; ++i1)
    for (Eigen::Index i2 = 0; i2 < n2; ++i2) {
      const double w12 = quad.weights[0][i1] * quad.weights[1][i2];
      total += w12 * quad.weights[2].dot(sq.segment((i1 * n2 + i2) * n3, n3));
    }
  return std::sqrt(total * geo.volume());
}

} // namespace hessiga
