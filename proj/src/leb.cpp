#include "hessiga/leb.hpp"

#include "hessiga/errors.hpp"
#include "hessiga/solve.hpp"

#include <cmath>
#include <random>

namespace hessiga {

namespace {

void append_block(std::vector<Eigen::Triplet<double>>& trips, const SparseMatrix& A, int row0, int col0,
                  double scale) {
  for (int j = 0; j < A.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(A, j); it; ++it)
      trips.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()), scale * it.value());
}

} // namespace

Eigen::VectorXd LebOperator::stack(const LebState& s) const {
  if (s.sigma.size() != n_sigma || s.E.size() != n_E || s.B.size() != n_B)
    throw ParameterError("state does not match the complex spaces");
  Eigen::VectorXd y(n_sigma + n_E + n_B);
  y << s.sigma, s.E, s.B;
  return y;
}

LebState LebOperator::unstack(const Eigen::VectorXd& y, double t) const {
  return LebState{t, y.head(n_sigma), y.segment(n_sigma, n_E), y.tail(n_B)};
}

double LebOperator::energy(const LebState& s) const {
  const Eigen::VectorXd y = stack(s);
  return y.dot(mass * y);
}

std::array<double, 3> LebOperator::norms(const LebState& s) const {
  const Eigen::VectorXd y = stack(s);
  const Eigen::VectorXd My = mass * y;
  return {std::sqrt(y.head(n_sigma).dot(My.head(n_sigma))),
          std::sqrt(y.segment(n_sigma, n_E).dot(My.segment(n_sigma, n_E))),
          std::sqrt(y.tail(n_B).dot(My.tail(n_B)))};
}

LebOperator build_leb_operator(const ComplexSpaces& spaces, const AffineGeometry& geo) {
  LebOperator op;
  const SparseMatrix M1 = mass_matrix(1, spaces, geo);
  const SparseMatrix M2 = mass_matrix(2, spaces, geo);
  const SparseMatrix M3 = mass_matrix(3, spaces, geo);
  const SparseMatrix B1 = M2 * hessian_matrix(spaces);  // <hess sigma, F>
  const SparseMatrix B2 = M3 * curl_matrix(spaces);     // <curl E, G>
  op.n_sigma = static_cast<int>(M1.rows());
  op.n_E = static_cast<int>(M2.rows());
  op.n_B = static_cast<int>(M3.rows());
  const int n = op.n_sigma + op.n_E + op.n_B;
  const int oE = op.n_sigma, oB = op.n_sigma + op.n_E;

  std::vector<Eigen::Triplet<double>> m, s;
  append_block(m, M1, 0, 0, 1.0);
  append_block(m, M2, oE, oE, 1.0);
  append_block(m, M3, oB, oB, 1.0);
  const SparseMatrix B1t = B1.transpose(), B2t = B2.transpose();
  append_block(s, B1t, 0, oE, 1.0);
  append_block(s, B1, oE, 0, -1.0);
  append_block(s, B2t, oE, oB, -1.0);
  append_block(s, B2, oB, oE, 1.0);
  op.mass.resize(n, n);
  op.mass.setFromTriplets(m.begin(), m.end());
  op.skew.resize(n, n);
  op.skew.setFromTriplets(s.begin(), s.end());
  return op;
}

LebState zero_leb_state(const ComplexSpaces& spaces) {
  return LebState{0.0, Eigen::VectorXd::Zero(spaces.level(1).size()), Eigen::VectorXd::Zero(spaces.level(2).size()),
                  Eigen::VectorXd::Zero(spaces.level(3).size())};
}

LebState random_leb_state(const ComplexSpaces& spaces, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  LebState s = zero_leb_state(spaces);
  for (Eigen::VectorXd* v : {&s.sigma, &s.E, &s.B})
    for (Eigen::Index i = 0; i < v->size(); ++i) (*v)[i] = dist(gen);
  return s;
}

LebTrajectory leb_evolve(const LebState& initial, double dt, int steps, const LebOperator& op, bool keep_states) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");
  if (steps < 0) throw ParameterError("step count must be nonnegative");
  Eigen::VectorXd y = op.stack(initial);

  const SparseMatrix lhs = op.mass - 0.5 * dt * op.skew;
  const SparseMatrix rhs = op.mass + 0.5 * dt * op.skew;
  const DirectSolver solver(lhs);

  LebTrajectory traj;
  auto record = [&](const Eigen::VectorXd& state, double t) {
    const LebState s = op.unstack(state, t);
    traj.times.push_back(t);
    traj.energy.push_back(op.energy(s));
    traj.norms.push_back(op.norms(s));
    if (keep_states) traj.states.push_back(s);
  };
  record(y, initial.t);
  for (int n = 1; n <= steps; ++n) {
    y = solver.solve(rhs * y);
    record(y, initial.t + n * dt);
  }
  return traj;
}

LebTrajectory leb_evolve(const LebState& initial, double dt, double T, const ComplexSpaces& spaces,
                         const AffineGeometry& geo, bool keep_states) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw ParameterError("time step must be positive and T nonnegative");
  const int steps = static_cast<int>(std::lround(T / dt));
  return leb_evolve(initial, dt, steps, build_leb_operator(spaces, geo), keep_states);
}

LebState leb_rate(const LebState& s, const LebOperator& op) {
  const DirectSolver solver(op.mass);
  return op.unstack(solver.solve(op.skew * op.stack(s)), s.t);
}

double default_leb_step(const AffineGeometry& geo, int N) { return geo.element_diameter(N) / 4.0; }

} // namespace hessiga
