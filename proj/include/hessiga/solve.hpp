#pragma once

#include <Eigen/Sparse>

#include <memory>
#include <string>

namespace hessiga {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class SolveMethod { Direct, Minres, Auto };

std::string to_string(SolveMethod method);
SolveMethod parse_solve_method(const std::string& name);

struct SolveConfig {
  SolveMethod method = SolveMethod::Auto;
  double tolerance = 1e-10;
  int max_iterations = 40000;
  int auto_threshold = 20000;

  void validate() const;
};

struct SolveReport {
  SolveMethod method = SolveMethod::Direct;
  int iterations = 0;
  double residual = 0.0;  // ||A x - b|| / ||b||, recomputed from the system
  double seconds = 0.0;
  bool converged = false;
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveReport report;
};

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b);

/// Sparse LU factorization, reusable for many right-hand sides.
/// The matrix must outlive the solver.
class DirectSolver {
public:
  explicit DirectSolver(const SparseMatrix& A);
  ~DirectSolver();
  DirectSolver(const DirectSolver&) = delete;
  DirectSolver& operator=(const DirectSolver&) = delete;

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// MINRES with |diag(A)| (Jacobi) preconditioning for symmetric, possibly indefinite A.
SolveResult minres(const SparseMatrix& A, const Eigen::VectorXd& b, const SolveConfig& config);

/// Direct for small systems, MINRES for large ones (or as configured).
SolveResult solve_symmetric(const SparseMatrix& A, const Eigen::VectorXd& b, const SolveConfig& config = {});

} // namespace hessiga
