#include "hessiga/solve.hpp"

#include "hessiga/errors.hpp"

#include <Eigen/UmfPackSupport>

#include <chrono>
#include <cmath>

namespace hessiga {

std::string to_string(SolveMethod method) {
  switch (method) {
  case SolveMethod::Direct: return "direct";
  case SolveMethod::Minres: return "minres";
  case SolveMethod::Auto: return "auto";
  }
  return "unknown";
}

SolveMethod parse_solve_method(const std::string& name) {
  if (name == "direct") return SolveMethod::Direct;
  if (name == "minres") return SolveMethod::Minres;
  if (name == "auto") return SolveMethod::Auto;
  throw ParameterError("unknown solver '" + name + "' (expected direct, minres or auto)");
}

void SolveConfig::validate() const {
  if (!(tolerance > 0.0)) throw ParameterError("solver tolerance must be positive");
  if (max_iterations < 1) throw ParameterError("max iterations must be at least 1");
  if (auto_threshold < 0) throw ParameterError("auto threshold must be nonnegative");
}

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (b - A * x).norm();
  return nb > 0.0 ? nr / nb : nr;
}

struct DirectSolver::Impl {
  Eigen::UmfPackLU<SparseMatrix> lu;
};

DirectSolver::DirectSolver(const SparseMatrix& A) : impl_(std::make_unique<Impl>()) {
  if (A.rows() != A.cols()) throw ParameterError("direct solver needs a square matrix");
  impl_->lu.compute(A);
  if (impl_->lu.info() != Eigen::Success) throw SingularityError("sparse LU factorization failed (singular matrix)");
}

DirectSolver::~DirectSolver() = default;

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success) throw SingularityError("sparse LU solve failed");
  return x;
}

SolveResult minres(const SparseMatrix& A, const Eigen::VectorXd& b, const SolveConfig& config) {
  const Eigen::Index n = A.rows();
  SolveResult res;
  res.report.method = SolveMethod::Minres;
  res.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.report.converged = true;
    return res;
  }

  Eigen::VectorXd dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(A.coeff(i, i));
    dinv[i] = d > 0.0 ? 1.0 / d : 1.0;
  }

  Eigen::VectorXd v_old = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v = b;
  Eigen::VectorXd z = dinv.cwiseProduct(v);
  double gamma = std::sqrt(z.dot(v));
  double gamma_old = 1.0;
  double eta = gamma;
  const double eta0 = gamma;
  double s_old = 0.0, s = 0.0, c_old = 1.0, c = 1.0;
  Eigen::VectorXd w_old = Eigen::VectorXd::Zero(n), w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd Az(n), v_new(n);

  auto true_residual = [&] { return relative_residual(A, res.x, b); };
  int it = 0;
  for (it = 1; it <= config.max_iterations; ++it) {
    z /= gamma;
    Az.noalias() = A * z;
    const double delta = Az.dot(z);
    v_new = Az - (delta / gamma) * v - (gamma / gamma_old) * v_old;
    Eigen::VectorXd z_new = dinv.cwiseProduct(v_new);
    const double gg = z_new.dot(v_new);
    if (gg < 0.0) throw SingularityError("MINRES preconditioner lost positivity");
    const double gamma_new = std::sqrt(gg);

    const double a0 = c * delta - c_old * s * gamma;
    const double a1 = std::sqrt(a0 * a0 + gamma_new * gamma_new);
    const double a2 = s * delta + c_old * c * gamma;
    const double a3 = s_old * gamma;
    if (a1 == 0.0) throw SingularityError("MINRES breakdown: singular system");
    const double c_new = a0 / a1, s_new = gamma_new / a1;

    Eigen::VectorXd w_new = (z - a3 * w_old - a2 * w) / a1;
    res.x += (c_new * eta) * w_new;
    eta = -s_new * eta;

    w_old.swap(w);
    w.swap(w_new);
    v_old.swap(v);
    v.swap(v_new);
    z.swap(z_new);
    gamma_old = gamma;
    gamma = gamma_new;
    c_old = c;
    c = c_new;
    s_old = s;
    s = s_new;

    const bool estimate_small = std::abs(eta) <= config.tolerance * eta0;
    if (estimate_small || gamma == 0.0 || it % 200 == 0) {
      if (true_residual() <= config.tolerance) {
        res.report.converged = true;
        break;
      }
      if (gamma == 0.0) break;
    }
  }
  res.report.iterations = std::min(it, config.max_iterations);
  return res;
}

SolveResult solve_symmetric(const SparseMatrix& A, const Eigen::VectorXd& b, const SolveConfig& config) {
  config.validate();
  if (A.rows() != A.cols() || A.rows() != b.size()) throw ParameterError("system dimensions do not match");
  const auto start = std::chrono::steady_clock::now();
  SolveMethod method = config.method;
  if (method == SolveMethod::Auto)
    method = A.rows() <= config.auto_threshold ? SolveMethod::Direct : SolveMethod::Minres;

  SolveResult res;
  if (method == SolveMethod::Direct) {
    res.report.method = SolveMethod::Direct;
    if (b.norm() == 0.0) {
      res.x = Eigen::VectorXd::Zero(b.size());
    } else {
      const DirectSolver lu(A);
      res.x = lu.solve(b);
      // One step of iterative refinement.
      if (relative_residual(A, res.x, b) > config.tolerance) res.x += lu.solve(b - A * res.x);
    }
    res.report.iterations = 1;
  } else {
    res = minres(A, b, config);
  }
  res.report.residual = relative_residual(A, res.x, b);
  res.report.converged = res.report.residual <= config.tolerance;
  res.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

} // namespace hessiga
