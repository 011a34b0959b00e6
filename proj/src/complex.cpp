#include "hessiga/complex.hpp"

#include "hessiga/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace hessiga {

bool ComponentSpace::same_space(const ComponentSpace& other) const {
  for (int d = 0; d < 3; ++d)
    if (!axes[d].same_space(other.axes[d])) return false;
  return true;
}

FieldLayout::FieldLayout(int level, std::vector<ComponentSpace> components)
    : level_(level), components_(std::move(components)) {
  if (level_ < 0 || level_ > 4) throw ParameterError("level out of range");
  if (level_ == 0) {
    if (!components_.empty()) throw ParameterError("level 0 has no spline components");
    size_ = 4;
    return;
  }
  if (static_cast<int>(components_.size()) != component_count(kind()))
    throw ParameterError("component count does not match the level");
  size_ = 0;
  for (const auto& c : components_) {
    offsets_.push_back(size_);
    size_ += c.size();
  }
}

FieldLayout FieldLayout::p1() { return FieldLayout(0, {}); }

PullbackKind FieldLayout::kind() const {
  if (level_ == 0) throw ParameterError("level 0 has no pullback kind");
  return static_cast<PullbackKind>(level_);
}

std::vector<std::array<int, 3>> component_pattern(int level) {
  switch (level) {
  case 1: return {{0, 0, 0}};
  case 2: return {{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  case 3: return {{1, 1, 1}, {2, 0, 1}, {2, 1, 0}, {0, 2, 1}, {1, 1, 1}, {1, 2, 0}, {0, 1, 2}, {1, 0, 2}};
  case 4: return {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
  default: throw ParameterError("component pattern defined for levels 1..4");
  }
}

std::string component_name(int level, int c) {
  switch (level) {
  case 1: return "phi";
  case 2: return "s" + std::to_string(c + 1);
  case 3: return "t" + std::to_string(c + 1);
  case 4: return "v" + std::to_string(c + 1);
  default: return "p1";
  }
}

ComplexSpaces::ComplexSpaces(int p, int r, int N) : p_(p), r_(r), N_(N) {
  if (p < 2) throw ParameterError("the spline Hessian complex needs p >= 2");
  if (r < 1 || r > p - 1) throw ParameterError("the spline Hessian complex needs 1 <= r <= p-1");
  if (N < 1) throw ParameterError("element count must be positive");
  for (int drop = 0; drop <= 2; ++drop) base_.push_back(make_uniform_space(p - drop, r - drop, N));
  levels_.push_back(FieldLayout::p1());
  for (int k = 1; k <= 4; ++k) {
    std::vector<ComponentSpace> comps;
    for (const auto& drops : component_pattern(k))
      comps.push_back(ComponentSpace{{base_[drops[0]], base_[drops[1]], base_[drops[2]]}});
    levels_.emplace_back(k, std::move(comps));
  }
}

const FieldLayout& ComplexSpaces::level(int k) const {
  if (k < 0 || k > 4) throw ParameterError("level out of range");
  return levels_[k];
}

int ComplexSpaces::total_dofs() const {
  int n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

ComplexSpaces build_complex(int p, int r, int N) { return ComplexSpaces(p, r, N); }

FieldLayout naive_layout(int level, int p, int r, int N) {
  if (level < 1 || level > 4) throw ParameterError("naive layouts exist for levels 1..4");
  const SplineSpace s = make_uniform_space(p, r, N);
  std::vector<ComponentSpace> comps(component_count(static_cast<PullbackKind>(level)), ComponentSpace{{s, s, s}});
  return FieldLayout(level, std::move(comps));
}

DiffOperator identity_operator(int components) {
  DiffOperator op{components, components, {}};
  for (int c = 0; c < components; ++c) op.terms.push_back({c, c, {0, 0, 0}, 1.0});
  return op;
}

DiffOperator hessian_operator() {
  DiffOperator op{1, 6, {}};
  op.terms = {{0, 0, {2, 0, 0}, 1.0}, {1, 0, {1, 1, 0}, 1.0}, {2, 0, {1, 0, 1}, 1.0},
              {3, 0, {0, 2, 0}, 1.0}, {4, 0, {0, 1, 1}, 1.0}, {5, 0, {0, 0, 2}, 1.0}};
  return op;
}

DiffOperator curl_operator() {
  // Row-wise curl of SYM(s1..s6) stored in TR order.
  constexpr std::array<int, 3> d1{1, 0, 0}, d2{0, 1, 0}, d3{0, 0, 1};
  DiffOperator op{6, 8, {}};
  op.terms = {
      {0, 2, d2, 1.0},  {0, 1, d3, -1.0},  // t1 = d2 s3 - d3 s2
      {1, 0, d3, 1.0},  {1, 2, d1, -1.0},  // t2 = d3 s1 - d1 s3
      {2, 1, d1, 1.0},  {2, 0, d2, -1.0},  // t3 = d1 s2 - d2 s1
      {3, 4, d2, 1.0},  {3, 3, d3, -1.0},  // t4 = d2 s5 - d3 s4
      {4, 2, d2, 1.0},  {4, 4, d1, -1.0},  // t5 = d2 s3 - d1 s5
      {5, 3, d1, 1.0},  {5, 1, d2, -1.0},  // t6 = d1 s4 - d2 s2
      {6, 5, d2, 1.0},  {6, 4, d3, -1.0},  // t7 = d2 s6 - d3 s5
      {7, 2, d3, 1.0},  {7, 5, d1, -1.0},  // t8 = d3 s3 - d1 s6
  };
  return op;
}

DiffOperator div_operator() {
  constexpr std::array<int, 3> d1{1, 0, 0}, d2{0, 1, 0}, d3{0, 0, 1};
  DiffOperator op{8, 3, {}};
  op.terms = {
      {0, 0, d1, 1.0}, {0, 1, d2, 1.0}, {0, 2, d3, 1.0},
      {1, 3, d1, 1.0}, {1, 4, d2, 1.0}, {1, 0, d2, -1.0}, {1, 5, d3, 1.0},
      {2, 6, d1, 1.0}, {2, 7, d2, 1.0}, {2, 4, d3, -1.0},
  };
  return op;
}

DiffOperator level_operator(int k) {
  switch (k) {
  case 1: return hessian_operator();
  case 2: return curl_operator();
  case 3: return div_operator();
  default: throw ParameterError("d^k defined for k = 1, 2, 3");
  }
}

namespace {

SparseMatrix derivative_map(const SplineSpace& source, const SplineSpace& target, int order) {
  SparseMatrix A = sparse_identity(source.dim());
  SplineSpace current = source;
  for (int k = 0; k < order; ++k) {
    A = SparseMatrix(current.derivative_matrix() * A);
    current = current.derivative_space();
  }
  if (!current.same_space(target))
    throw ConstructionError("differential term maps outside the target component space");
  return A;
}

} // namespace

SparseMatrix differential_matrix(const DiffOperator& op, const FieldLayout& source, const FieldLayout& target) {
  if (source.level() == 0 || target.level() == 0) throw ParameterError("level 0 has no spline components");
  if (op.in_components != source.components() || op.out_components != target.components())
    throw ParameterError("operator shape does not match the layouts");
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& t : op.terms) {
    const ComponentSpace& src = source.component(t.in);
    const ComponentSpace& dst = target.component(t.out);
    const SparseMatrix block = kron3(derivative_map(src.axes[0], dst.axes[0], t.order[0]),
                                     derivative_map(src.axes[1], dst.axes[1], t.order[1]),
                                     derivative_map(src.axes[2], dst.axes[2], t.order[2]));
    const int ro = target.offset(t.out), co = source.offset(t.in);
    for (int j = 0; j < block.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(block, j); it; ++it) trips.emplace_back(ro + it.row(), co + j, t.coef * it.value());
  }
  SparseMatrix D(target.size(), source.size());
  D.setFromTriplets(trips.begin(), trips.end());
  D.prune(0.0);
  return D;
}

SparseMatrix hessian_matrix(const ComplexSpaces& spaces) {
  return differential_matrix(hessian_operator(), spaces.level(1), spaces.level(2));
}

SparseMatrix curl_matrix(const ComplexSpaces& spaces) {
  return differential_matrix(curl_operator(), spaces.level(2), spaces.level(3));
}

SparseMatrix div_matrix(const ComplexSpaces& spaces) {
  return differential_matrix(div_operator(), spaces.level(3), spaces.level(4));
}

SparseMatrix p1_embedding(const ComplexSpaces& spaces, const AffineGeometry& geo) {
  const ComponentSpace& c = spaces.level(1).component(0);
  const Dims3 n = c.dims();
  const std::array<std::vector<double>, 3> g{c.axes[0].greville(), c.axes[1].greville(), c.axes[2].greville()};
  Eigen::MatrixXd dense(c.size(), 4);
  for (int i1 = 0; i1 < n[0]; ++i1)
    for (int i2 = 0; i2 < n[1]; ++i2)
      for (int i3 = 0; i3 < n[2]; ++i3) {
        const int row = flat_index(n, i1, i2, i3);
        const Vec3 x = geo.map(Vec3(g[0][i1], g[1][i2], g[2][i3]));
        dense(row, 0) = 1.0;
        for (int a = 0; a < 3; ++a) dense(row, a + 1) = x[a];
      }
  return dense.sparseView();
}

Eigen::VectorXd singular_values(const SparseMatrix& A) {
  Eigen::MatrixXd dense(A);
  const lapack_int m = static_cast<lapack_int>(dense.rows());
  const lapack_int n = static_cast<lapack_int>(dense.cols());
  Eigen::VectorXd s(std::min(m, n));
  if (s.size() == 0) return s;
  const lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, dense.data(), m, s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw ConstructionError("singular value decomposition failed");
  return s;
}

int numerical_rank(const Eigen::VectorXd& sigma, double relative_threshold) {
  if (sigma.size() == 0) return 0;
  const double cut = relative_threshold * sigma.maxCoeff();
  return static_cast<int>((sigma.array() > cut).count());
}

ExactnessReport verify_exactness(const ComplexSpaces& spaces, int max_unknowns) {
  ExactnessReport rep;
  for (int k = 1; k <= 4; ++k) rep.dims[k - 1] = spaces.level(k).size();
  const int largest = *std::max_element(rep.dims.begin(), rep.dims.end());
  if (largest > max_unknowns) {
    rep.message = "size guard: " + std::to_string(largest) + " unknowns exceed the dense limit of " +
                  std::to_string(max_unknowns);
    return rep;
  }
  const SparseMatrix D[3] = {hessian_matrix(spaces), curl_matrix(spaces), div_matrix(spaces)};
  for (int k = 0; k < 3; ++k) rep.ranks[k] = numerical_rank(singular_values(D[k]));
  rep.kernel_d1 = rep.dims[0] - rep.ranks[0];
  rep.defect_level2 = (rep.dims[1] - rep.ranks[1]) - rep.ranks[0];
  rep.defect_level3 = (rep.dims[2] - rep.ranks[2]) - rep.ranks[1];
  rep.defect_level4 = rep.dims[3] - rep.ranks[2];
  rep.checked = true;
  rep.message = "ranks computed";
  return rep;
}

double scaled_product_norm(const SparseMatrix& second, const SparseMatrix& first) {
  const SparseMatrix P = second * first;
  double pmax = 0.0;
  for (int j = 0; j < P.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(P, j); it; ++it) pmax = std::max(pmax, std::abs(it.value()));
  auto max_abs = [](const SparseMatrix& A) {
    double m = 0.0;
    for (int j = 0; j < A.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(A, j); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
  };
  const double scale = max_abs(second) * max_abs(first);
  return scale > 0.0 ? pmax / scale : pmax;
}

void export_coordinates(std::ostream& os, const SparseMatrix& A) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  os << std::setprecision(17);
  for (int j = 0; j < A.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(A, j); it; ++it) os << it.row() + 1 << ' ' << j + 1 << ' ' << it.value() << '\n';
}

} // namespace hessiga
