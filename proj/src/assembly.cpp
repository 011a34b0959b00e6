#include "hessiga/assembly.hpp"

#include "hessiga/errors.hpp"
#include "hessiga/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace hessiga {

Eigen::MatrixXd level_metric(int level, const AffineGeometry& geo) {
  if (level < 1 || level > 4) throw ParameterError("metric defined for levels 1..4");
  const Eigen::MatrixXd G = pushforward_matrix(static_cast<PullbackKind>(level), geo);
  return G.transpose() * G;
}

namespace {

void check_same_mesh(const SplineSpace& a, const SplineSpace& b) {
  if (a.mesh().breakpoints != b.mesh().breakpoints) throw ParameterError("spaces live on different meshes");
}

using SpaceKey = std::pair<int, int>;
SpaceKey space_key(const SplineSpace& s) { return {s.degree(), s.regularity()}; }

/// Trial index j -> sorted test indices whose supports share an element with B_j.
std::vector<std::vector<int>> overlap_lists(const SplineSpace& test, const SplineSpace& trial) {
  std::vector<std::pair<int, int>> rs(test.dim());
  for (int i = 0; i < test.dim(); ++i) rs[i] = test.support_elements(i);
  std::vector<std::vector<int>> out(trial.dim());
  for (int j = 0; j < trial.dim(); ++j) {
    const auto [b0, b1] = trial.support_elements(j);
    for (int i = 0; i < test.dim(); ++i)
      if (rs[i].first <= b1 && b0 <= rs[i].second) out[j].push_back(i);
  }
  return out;
}

} // namespace

Eigen::MatrixXd cross_gram(const SplineSpace& test, int test_order, const SplineSpace& trial, int trial_order) {
  check_same_mesh(test, trial);
  const int pa = test.degree(), pb = trial.degree();
  const int q = (pa + pb) / 2 + 2;
  const ElementQuadrature rule = element_quadrature(test.mesh(), q);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(test.dim(), trial.dim());
  Eigen::MatrixXd va(test_order + 1, pa + 1), vb(trial_order + 1, pb + 1);
  for (int k = 0; k < rule.size(); ++k) {
    const int fa = test.eval_active(rule.points[k], test_order, va);
    const int fb = trial.eval_active(rule.points[k], trial_order, vb);
    G.block(fa, fb, pa + 1, pb + 1).noalias() +=
        rule.weights[k] * va.row(test_order).transpose() * vb.row(trial_order);
  }
  return G;
}

SparseMatrix kronecker_form(const FieldLayout& test, const DiffOperator& test_op, const FieldLayout& trial,
                            const DiffOperator& trial_op, const Eigen::MatrixXd& metric, double scale) {
  const int nt = test.components(), ns = trial.components();
  if (test.level() == 0 || trial.level() == 0) throw ParameterError("level 0 has no spline components");
  if (test_op.in_components != nt || trial_op.in_components != ns)
    throw ParameterError("operator inputs do not match the layouts");
  if (test_op.out_components != metric.rows() || trial_op.out_components != metric.cols())
    throw ParameterError("operator outputs do not match the metric");

  using GramKey = std::tuple<SpaceKey, int, SpaceKey, int>;
  std::map<GramKey, Eigen::MatrixXd> grams;
  auto gram = [&](const SplineSpace& a, int oa, const SplineSpace& b, int ob) -> const Eigen::MatrixXd* {
    const GramKey key{space_key(a), oa, space_key(b), ob};
    auto it = grams.find(key);
    if (it == grams.end()) it = grams.emplace(key, cross_gram(a, oa, b, ob)).first;
    return &it->second;
  };

  struct Contribution {
    double w;
    std::array<const Eigen::MatrixXd*, 3> g;
  };
  std::vector<std::vector<std::vector<Contribution>>> blocks(nt, std::vector<std::vector<Contribution>>(ns));
  const double wmax = metric.cwiseAbs().maxCoeff();
  for (const auto& a : test_op.terms)
    for (const auto& b : trial_op.terms) {
      const double m = metric(a.out, b.out);
      if (std::abs(m) <= 1e-14 * wmax) continue;
      const ComponentSpace& ca = test.component(a.in);
      const ComponentSpace& cb = trial.component(b.in);
      Contribution c{scale * m * a.coef * b.coef, {}};
      for (int d = 0; d < 3; ++d) c.g[d] = gram(ca.axes[d], a.order[d], cb.axes[d], b.order[d]);
      blocks[a.in][b.in].push_back(c);
    }

  std::map<std::pair<SpaceKey, SpaceKey>, std::vector<std::vector<int>>> overlaps;
  auto overlap = [&](const SplineSpace& a, const SplineSpace& b) -> const std::vector<std::vector<int>>* {
    const auto key = std::make_pair(space_key(a), space_key(b));
    auto it = overlaps.find(key);
    if (it == overlaps.end()) it = overlaps.emplace(key, overlap_lists(a, b)).first;
    return &it->second;
  };
  std::vector<std::vector<std::array<const std::vector<std::vector<int>>*, 3>>> lists(
      nt, std::vector<std::array<const std::vector<std::vector<int>>*, 3>>(ns));
  for (int ci = 0; ci < nt; ++ci)
    for (int cj = 0; cj < ns; ++cj)
      if (!blocks[ci][cj].empty())
        for (int d = 0; d < 3; ++d) lists[ci][cj][d] = overlap(test.component(ci).axes[d], trial.component(cj).axes[d]);

  // Column counts, then a single fill pass into compressed storage.
  const int ncols = trial.size();
  std::vector<Eigen::Index> outer(ncols + 1, 0);
  for (int cj = 0; cj < ns; ++cj) {
    const Dims3 n = trial.component(cj).dims();
    for (int j1 = 0; j1 < n[0]; ++j1)
      for (int j2 = 0; j2 < n[1]; ++j2)
        for (int j3 = 0; j3 < n[2]; ++j3) {
          Eigen::Index count = 0;
          for (int ci = 0; ci < nt; ++ci) {
            if (blocks[ci][cj].empty()) continue;
            const auto& L = lists[ci][cj];
            count += static_cast<Eigen::Index>((*L[0])[j1].size() * (*L[1])[j2].size() * (*L[2])[j3].size());
          }
          outer[trial.offset(cj) + flat_index(n, j1, j2, j3) + 1] = count;
        }
  }
  for (int j = 0; j < ncols; ++j) outer[j + 1] += outer[j];

  SparseMatrix A(test.size(), ncols);
  A.resizeNonZeros(outer[ncols]);
  std::copy(outer.begin(), outer.end(), A.outerIndexPtr());
  int* inner = A.innerIndexPtr();
  double* values = A.valuePtr();

  std::vector<double> partial;
  for (int cj = 0; cj < ns; ++cj) {
    const Dims3 n = trial.component(cj).dims();
    for (int j1 = 0; j1 < n[0]; ++j1)
      for (int j2 = 0; j2 < n[1]; ++j2)
        for (int j3 = 0; j3 < n[2]; ++j3) {
          Eigen::Index pos = outer[trial.offset(cj) + flat_index(n, j1, j2, j3)];
          for (int ci = 0; ci < nt; ++ci) {
            const auto& contribs = blocks[ci][cj];
            if (contribs.empty()) continue;
            const auto& L = lists[ci][cj];
            const Dims3 m = test.component(ci).dims();
            const int ro = test.offset(ci);
            partial.resize(contribs.size());
            for (int i1 : (*L[0])[j1])
              for (int i2 : (*L[1])[j2]) {
                for (std::size_t c = 0; c < contribs.size(); ++c)
                  partial[c] = contribs[c].w * (*contribs[c].g[0])(i1, j1) * (*contribs[c].g[1])(i2, j2);
                for (int i3 : (*L[2])[j3]) {
                  double v = 0.0;
                  for (std::size_t c = 0; c < contribs.size(); ++c) v += partial[c] * (*contribs[c].g[2])(i3, j3);
                  inner[pos] = ro + flat_index(m, i1, i2, i3);
                  values[pos] = v;
                  ++pos;
                }
              }
          }
        }
  }
  return A;
}

namespace {

/// Operator outputs of every active basis function of a layout at one point.
struct ActiveImages {
  std::vector<int> index;
  std::vector<Eigen::VectorXd> out;
};

ActiveImages active_images(const FieldLayout& layout, const DiffOperator& op, const Vec3& z) {
  ActiveImages img;
  for (int c = 0; c < layout.components(); ++c) {
    const ComponentSpace& cs = layout.component(c);
    std::array<Eigen::MatrixXd, 3> vals;
    std::array<int, 3> first{};
    for (int d = 0; d < 3; ++d) {
      const int p = cs.axes[d].degree();
      vals[d].resize(3, p + 1);
      first[d] = cs.axes[d].eval_active(z[d], 2, vals[d]);
    }
    const Dims3 n = cs.dims();
    for (int a1 = 0; a1 < vals[0].cols(); ++a1)
      for (int a2 = 0; a2 < vals[1].cols(); ++a2)
        for (int a3 = 0; a3 < vals[2].cols(); ++a3) {
          Eigen::VectorXd o = Eigen::VectorXd::Zero(op.out_components);
          for (const auto& t : op.terms) {
            if (t.in != c) continue;
            o[t.out] += t.coef * vals[0](t.order[0], a1) * vals[1](t.order[1], a2) * vals[2](t.order[2], a3);
          }
          img.index.push_back(layout.offset(c) + flat_index(n, first[0] + a1, first[1] + a2, first[2] + a3));
          img.out.push_back(std::move(o));
        }
  }
  return img;
}

} // namespace

SparseMatrix quadrature_form(const FieldLayout& test, const DiffOperator& test_op, const FieldLayout& trial,
                             const DiffOperator& trial_op, const Eigen::MatrixXd& pushforward, double scale, int q) {
  if (test_op.out_components != pushforward.cols() || trial_op.out_components != pushforward.cols())
    throw ParameterError("operator outputs do not match the pushforward");
  const Mesh1D& mesh = test.component(0).axes[0].mesh();
  const int N = mesh.elements();
  const GaussRule rule = gauss_legendre(q);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(test.size(), trial.size());
  for (int e1 = 0; e1 < N; ++e1)
    for (int e2 = 0; e2 < N; ++e2)
      for (int e3 = 0; e3 < N; ++e3)
        for (int g1 = 0; g1 < q; ++g1)
          for (int g2 = 0; g2 < q; ++g2)
            for (int g3 = 0; g3 < q; ++g3) {
              const int e[3] = {e1, e2, e3};
              const int g[3] = {g1, g2, g3};
              Vec3 z;
              double w = scale;
              for (int d = 0; d < 3; ++d) {
                const double a = mesh.breakpoints[e[d]], h = mesh.element_size(e[d]);
                z[d] = a + h * rule.points[g[d]];
                w *= h * rule.weights[g[d]];
              }
              const ActiveImages ti = active_images(test, test_op, z);
              const ActiveImages si = active_images(trial, trial_op, z);
              std::vector<Eigen::VectorXd> tp, sp;
              for (const auto& o : ti.out) tp.push_back(pushforward * o);
              for (const auto& o : si.out) sp.push_back(pushforward * o);
              for (std::size_t a = 0; a < tp.size(); ++a)
                for (std::size_t b = 0; b < sp.size(); ++b) dense(ti.index[a], si.index[b]) += w * tp[a].dot(sp[b]);
            }
  return dense.sparseView(1.0, 0.0);
}

namespace {

SparseMatrix p1_gram(const AffineGeometry& geo) {
  const GaussRule rule = gauss_legendre(2);
  Eigen::Matrix4d G = Eigen::Matrix4d::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const Vec3 x = geo.map(Vec3(rule.points[a], rule.points[b], rule.points[c]));
        const Eigen::Vector4d psi(1.0, x[0], x[1], x[2]);
        G += rule.weights[a] * rule.weights[b] * rule.weights[c] * psi * psi.transpose();
      }
  G *= geo.volume();
  return Eigen::MatrixXd(G).sparseView();
}

} // namespace

SparseMatrix mass_matrix(const FieldLayout& layout, const AffineGeometry& geo) {
  if (layout.level() == 0) return p1_gram(geo);
  const DiffOperator id = identity_operator(layout.components());
  return kronecker_form(layout, id, layout, id, level_metric(layout.level(), geo), geo.volume());
}

SparseMatrix mass_matrix(int level, const ComplexSpaces& spaces, const AffineGeometry& geo) {
  return mass_matrix(spaces.level(level), geo);
}

SparseMatrix coupling_matrix(int k, const ComplexSpaces& spaces, const AffineGeometry& geo, const SparseMatrix& D) {
  if (k < 1 || k > 4) throw ParameterError("coupling defined for k = 1..4");
  if (D.rows() != spaces.level(k).size() || D.cols() != spaces.level(k - 1).size())
    throw ParameterError("differential matrix does not map level k-1 to level k");
  return mass_matrix(k, spaces, geo) * D;
}

int default_load_points(int p) { return std::max(p + 2, 24); }

Eigen::VectorXd load_vector(const FieldLayout& layout, const AnalyticField& f, const AffineGeometry& geo, int q) {
  if (layout.level() == 0) throw ParameterError("load vectors are assembled on spline levels");
  if (f.level != layout.level()) throw ParameterError("field level does not match the layout");
  const auto kind = layout.kind();
  if (static_cast<int>(f.entries.size()) != entry_count(kind)) throw ParameterError("field shape does not match");

  const Eigen::MatrixXd G = pushforward_matrix(kind, geo);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(layout.size());
  for (int c = 0; c < layout.components(); ++c) {
    SeparableScalar g;
    for (int e = 0; e < G.rows(); ++e)
      if (G(e, c) != 0.0) g += G(e, c) * f.entries[e];
    if (g.is_zero()) continue;

    const ComponentSpace& cs = layout.component(c);
    // Moments int factor(t) B_i(t) dt per axis and distinct factor.
    std::array<std::map<Factor, Eigen::VectorXd>, 3> moments;
    for (int d = 0; d < 3; ++d) {
      const SplineSpace& s = cs.axes[d];
      const int qq = q > 0 ? q : default_load_points(s.degree());
      const ElementQuadrature rule = element_quadrature(s.mesh(), qq);
      Eigen::MatrixXd vals(1, s.degree() + 1);
      std::vector<int> first(rule.size());
      Eigen::MatrixXd active(s.degree() + 1, rule.size());
      for (int k = 0; k < rule.size(); ++k) {
        first[k] = s.eval_active(rule.points[k], 0, vals);
        active.col(k) = vals.row(0).transpose();
      }
      for (const auto& [key, coef] : g.terms()) {
        if (moments[d].count(key[d])) continue;
        Eigen::VectorXd m = Eigen::VectorXd::Zero(s.dim());
        for (int k = 0; k < rule.size(); ++k)
          m.segment(first[k], s.degree() + 1) += rule.weights[k] * key[d](rule.points[k]) * active.col(k);
        moments[d].emplace(key[d], std::move(m));
      }
    }
    const Dims3 n = cs.dims();
    auto block = F.segment(layout.offset(c), cs.size());
    for (const auto& [key, coef] : g.terms()) {
      const Eigen::VectorXd& m1 = moments[0].at(key[0]);
      const Eigen::VectorXd& m2 = moments[1].at(key[1]);
      const Eigen::VectorXd& m3 = moments[2].at(key[2]);
      for (int i1 = 0; i1 < n[0]; ++i1)
        for (int i2 = 0; i2 < n[1]; ++i2)
          block.segment(flat_index(n, i1, i2, 0), n[2]) += (coef * m1[i1] * m2[i2]) * m3;
    }
  }
  return F * geo.volume();
}

SaddleBlocks hodge_blocks(int k, const ComplexSpaces& spaces, const AffineGeometry& geo) {
  if (k < 1 || k > 4) throw ParameterError("level k must be in 1..4");
  SaddleBlocks b;
  b.m_sigma = mass_matrix(k - 1, spaces, geo);
  const SparseMatrix D = k == 1 ? p1_embedding(spaces, geo) : differential_matrix(level_operator(k - 1), spaces.level(k - 1), spaces.level(k));
  b.coupling = coupling_matrix(k, spaces, geo, D);
  if (k < 4) {
    const SparseMatrix Dk = differential_matrix(level_operator(k), spaces.level(k), spaces.level(k + 1));
    const SparseMatrix MD = mass_matrix(k + 1, spaces, geo) * Dk;
    b.stiffness = SparseMatrix(Dk.transpose()) * MD;
  } else {
    b.stiffness = SparseMatrix(spaces.level(4).size(), spaces.level(4).size());
  }
  return b;
}

SaddleBlocks naive_hodge_blocks(int k, int p, int r, int N, const AffineGeometry& geo) {
  if (k < 2 || k > 4) throw ParameterError("naive blocks are defined for k = 2..4");
  const FieldLayout sigma = naive_layout(k - 1, p, r, N);
  const FieldLayout u = naive_layout(k, p, r, N);
  SaddleBlocks b;
  b.m_sigma = mass_matrix(sigma, geo);
  b.coupling = kronecker_form(u, identity_operator(u.components()), sigma, level_operator(k - 1),
                              level_metric(k, geo), geo.volume());
  if (k < 4) {
    const DiffOperator d = level_operator(k);
    b.stiffness = kronecker_form(u, d, u, d, level_metric(k + 1, geo), geo.volume());
  } else {
    b.stiffness = SparseMatrix(u.size(), u.size());
  }
  return b;
}

SparseMatrix saddle_matrix(const SaddleBlocks& blocks) {
  const SparseMatrix& M = blocks.m_sigma;
  const SparseMatrix& B = blocks.coupling;
  const SparseMatrix& K = blocks.stiffness;
  const Eigen::Index ns = M.rows(), nu = B.rows();
  if (M.cols() != ns || B.cols() != ns || K.rows() != nu || K.cols() != nu)
    throw ParameterError("inconsistent saddle blocks");
  const SparseMatrix Bt = B.transpose();
  const Eigen::Index n = ns + nu;

  std::vector<Eigen::Index> outer(n + 1, 0);
  for (Eigen::Index j = 0; j < ns; ++j)
    outer[j + 1] = outer[j] + (M.outerIndexPtr()[j + 1] - M.outerIndexPtr()[j]) + (B.outerIndexPtr()[j + 1] - B.outerIndexPtr()[j]);
  for (Eigen::Index j = 0; j < nu; ++j)
    outer[ns + j + 1] = outer[ns + j] + (Bt.outerIndexPtr()[j + 1] - Bt.outerIndexPtr()[j]) +
                        (K.outerIndexPtr()[j + 1] - K.outerIndexPtr()[j]);

  SparseMatrix A(n, n);
  A.resizeNonZeros(outer[n]);
  std::copy(outer.begin(), outer.end(), A.outerIndexPtr());
  Eigen::Index pos = 0;
  auto append = [&](const SparseMatrix& S, Eigen::Index col, Eigen::Index row_shift, double sign) {
    for (SparseMatrix::InnerIterator it(S, col); it; ++it) {
      A.innerIndexPtr()[pos] = static_cast<int>(it.row() + row_shift);
      A.valuePtr()[pos] = sign * it.value();
      ++pos;
    }
  };
  for (Eigen::Index j = 0; j < ns; ++j) {
    append(M, j, 0, -1.0);
    append(B, j, ns, 1.0);
  }
  for (Eigen::Index j = 0; j < nu; ++j) {
    append(Bt, j, 0, 1.0);
    append(K, j, ns, 1.0);
  }
  return A;
}

SaddleSystem build_saddle_system(int k, const ComplexSpaces& spaces, const AffineGeometry& geo, const AnalyticField& f) {
  SaddleSystem sys;
  sys.level = k;
  const SaddleBlocks blocks = hodge_blocks(k, spaces, geo);
  sys.n_sigma = static_cast<int>(blocks.m_sigma.rows());
  sys.n_u = static_cast<int>(blocks.coupling.rows());
  sys.matrix = saddle_matrix(blocks);
  sys.rhs = Eigen::VectorXd::Zero(sys.n_sigma + sys.n_u);
  sys.rhs.tail(sys.n_u) = load_vector(spaces.level(k), f, geo);
  return sys;
}

} // namespace hessiga
