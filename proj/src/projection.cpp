#include "hessiga/projection.hpp"

#include "hessiga/errors.hpp"

#include <algorithm>

namespace hessiga {

int default_projection_nodes(int p) { return std::max(p + 2, 20); }

namespace {

int resolve_nodes(const SplineSpace& space, int nodes_per_element) {
  return nodes_per_element > 0 ? nodes_per_element : default_projection_nodes(space.degree());
}

double lagrange(const std::vector<double>& x, int j, double s) {
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (static_cast<int>(i) != j) v *= (s - x[i]) / (x[j] - x[i]);
  return v;
}

} // namespace

DualFunctionals::DualFunctionals(const SplineSpace& space, int nodes_per_element)
    : space_(space), nodes_(element_quadrature(space.mesh(), resolve_nodes(space, nodes_per_element))) {
  const int p = space_.degree();
  const int n = space_.dim();
  const int q = nodes_.per_element;

  // Active basis values at every node.
  Eigen::MatrixXd vals(1, p + 1);
  std::vector<int> first(nodes_.size());
  Eigen::MatrixXd active(p + 1, nodes_.size());
  for (int k = 0; k < nodes_.size(); ++k) {
    first[k] = space_.eval_active(nodes_.points[k], 0, vals);
    active.col(k) = vals.row(0).transpose();
  }

  matrix_ = Eigen::MatrixXd::Zero(n, nodes_.size());
  for (int i = 0; i < n; ++i) {
    const auto [e0, e1] = space_.support_elements(i);
    const int l0 = space_.first_active(e0);
    const int l1 = space_.first_active(e1) + p;
    const int L = l1 - l0 + 1;
    const int k0 = e0 * q, k1 = (e1 + 1) * q;

    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(L, k1 - k0);
    for (int k = k0; k < k1; ++k)
      for (int j = 0; j <= p; ++j) R(first[k] + j - l0, k - k0) = nodes_.weights[k] * active(j, k);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(L, L);
    for (int k = k0; k < k1; ++k)
      for (int a = 0; a <= p; ++a)
        for (int b = 0; b <= p; ++b)
          G(first[k] + a - l0, first[k] + b - l0) += nodes_.weights[k] * active(a, k) * active(b, k);

    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw ConstructionError("singular local Gram system");
    const Eigen::VectorXd y = llt.solve(Eigen::VectorXd::Unit(L, i - l0));
    matrix_.block(i, k0, 1, k1 - k0) = y.transpose() * R;
  }
}

Eigen::VectorXd DualFunctionals::apply(const std::function<double(double)>& f) const {
  Eigen::VectorXd s(nodes_.size());
  for (int k = 0; k < nodes_.size(); ++k) s[k] = f(nodes_.points[k]);
  return apply(s);
}

DualFunctionals build_dual_functionals(const SplineSpace& space, int nodes_per_element) {
  return DualFunctionals(space, nodes_per_element);
}

Eigen::MatrixXd antiderivative_matrix(const ElementQuadrature& nodes, const Mesh1D& mesh, int times) {
  if (times != 1 && times != 2) throw ParameterError("antiderivative order must be 1 or 2");
  const int q = nodes.per_element;
  const int M = nodes.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
  for (int e = 0; e < mesh.elements(); ++e) {
    const double a = mesh.breakpoints[e];
    const std::vector<double> local(nodes.points.begin() + e * q, nodes.points.begin() + (e + 1) * q);
    for (int kk = 0; kk < q; ++kk) {
      const int k = e * q + kk;
      const double x = nodes.points[k];
      // Whole earlier elements by their own quadrature.
      for (int j = 0; j < e * q; ++j) A(k, j) = times == 1 ? nodes.weights[j] : nodes.weights[j] * (x - nodes.points[j]);
      // Partial element through the interpolant on the element nodes.
      const GaussRule sub = gauss_legendre(q, a, x);
      for (int jj = 0; jj < q; ++jj) {
        double s = 0.0;
        for (int g = 0; g < q; ++g) {
          const double kernel = times == 1 ? 1.0 : (x - sub.points[g]);
          s += sub.weights[g] * kernel * lagrange(local, jj, sub.points[g]);
        }
        A(k, e * q + jj) = s;
      }
    }
  }
  return A;
}

UnivariateProjector::UnivariateProjector(ProjectorKind kind, const SplineSpace& base, int nodes_per_element)
    : kind_(kind), base_(base), target_(base),
      nodes_(element_quadrature(base.mesh(), resolve_nodes(base, nodes_per_element))) {
  const DualFunctionals dual(base_, nodes_.per_element);
  switch (kind_) {
  case ProjectorKind::Plain: matrix_ = dual.matrix(); break;
  case ProjectorKind::C1: {
    if (base_.degree() < 1 || base_.regularity() < 0)
      throw ParameterError("the c1 projector needs p >= 1 and r >= 0");
    target_ = base_.derivative_space();
    const Eigen::MatrixXd E(base_.derivative_matrix());
    matrix_ = E * dual.matrix() * antiderivative_matrix(nodes_, base_.mesh(), 1);
    break;
  }
  case ProjectorKind::C2: {
    if (base_.degree() < 2 || base_.regularity() < 1)
      throw ParameterError("the c2 projector needs p >= 2 and r >= 1");
    const SplineSpace d1 = base_.derivative_space();
    target_ = d1.derivative_space();
    const Eigen::MatrixXd E2 = Eigen::MatrixXd(d1.derivative_matrix()) * Eigen::MatrixXd(base_.derivative_matrix());
    matrix_ = E2 * dual.matrix() * antiderivative_matrix(nodes_, base_.mesh(), 2);
    break;
  }
  default: throw ParameterError("unknown projector kind");
  }
}

Eigen::VectorXd UnivariateProjector::project(const std::function<double(double)>& f) const {
  Eigen::VectorXd s(nodes_.size());
  for (int k = 0; k < nodes_.size(); ++k) s[k] = f(nodes_.points[k]);
  return apply(s);
}

TensorProjector::TensorProjector(int level, const ComplexSpaces& spaces, int nodes_per_element)
    : level_(level), layout_(spaces.level(level)), pattern_(component_pattern(level)) {
  const SplineSpace& base = spaces.base(0);
  const int m = resolve_nodes(base, nodes_per_element);
  for (int kind = 0; kind < 3; ++kind)
    matrices_[kind] = UnivariateProjector(static_cast<ProjectorKind>(kind), base, m).matrix();
  const ElementQuadrature nodes = element_quadrature(base.mesh(), m);
  axes_ = {nodes.points, nodes.points, nodes.points};
}

std::array<ProjectorKind, 3> TensorProjector::kinds(int component) const {
  const auto& d = pattern_.at(component);
  return {static_cast<ProjectorKind>(d[0]), static_cast<ProjectorKind>(d[1]), static_cast<ProjectorKind>(d[2])};
}

Eigen::VectorXd TensorProjector::project_samples(const std::vector<Eigen::VectorXd>& samples) const {
  if (static_cast<int>(samples.size()) != layout_.components())
    throw ParameterError("field shape does not match the projector level");
  const Eigen::Index grid = static_cast<Eigen::Index>(axes_[0].size() * axes_[1].size() * axes_[2].size());
  Eigen::VectorXd out(layout_.size());
  for (int c = 0; c < layout_.components(); ++c) {
    if (samples[c].size() != grid) throw ParameterError("sample grid has the wrong size");
    const auto& d = pattern_[c];
    out.segment(layout_.offset(c), layout_.component(c).size()) =
        kron_apply(matrices_[d[0]], matrices_[d[1]], matrices_[d[2]], samples[c]);
  }
  return out;
}

Eigen::VectorXd TensorProjector::project(const std::vector<SeparableScalar>& components) const {
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(components.size());
  for (const auto& c : components) samples.push_back(c.evaluate_grid(axes_));
  return project_samples(samples);
}

Eigen::VectorXd TensorProjector::project(const std::function<void(const Vec3&, double*)>& pointwise) const {
  const int nc = layout_.components();
  const Dims3 n{static_cast<int>(axes_[0].size()), static_cast<int>(axes_[1].size()), static_cast<int>(axes_[2].size())};
  std::vector<Eigen::VectorXd> samples(nc, Eigen::VectorXd(n[0] * n[1] * n[2]));
  std::vector<double> buf(nc);
  for (int i1 = 0; i1 < n[0]; ++i1)
    for (int i2 = 0; i2 < n[1]; ++i2)
      for (int i3 = 0; i3 < n[2]; ++i3) {
        pointwise(Vec3(axes_[0][i1], axes_[1][i2], axes_[2][i3]), buf.data());
        const int idx = flat_index(n, i1, i2, i3);
        for (int c = 0; c < nc; ++c) samples[c][idx] = buf[c];
      }
  return project_samples(samples);
}

std::vector<SeparableScalar> parametric_components(const AnalyticField& field, const AffineGeometry& geo) {
  if (field.level < 1 || field.level > 4) throw ParameterError("parametric components exist for levels 1..4");
  const auto kind = static_cast<PullbackKind>(field.level);
  if (static_cast<int>(field.entries.size()) != entry_count(kind))
    throw ParameterError("field shape does not match its level");
  const Eigen::MatrixXd P = pullback_matrix(kind, geo);
  std::vector<SeparableScalar> comps(P.rows());
  for (int c = 0; c < P.rows(); ++c)
    for (int e = 0; e < P.cols(); ++e)
      if (P(c, e) != 0.0) comps[c] += P(c, e) * field.entries[e];
  return comps;
}

Eigen::VectorXd physical_project(int level, const ComplexSpaces& spaces, const AffineGeometry& geo,
                                 const AnalyticField& field, int nodes_per_element) {
  if (field.level != level) throw ParameterError("field level does not match the projection level");
  return TensorProjector(level, spaces, nodes_per_element).project(parametric_components(field, geo));
}

} // namespace hessiga
