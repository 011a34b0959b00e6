#pragma once

#include "hessiga/analytic.hpp"
#include "hessiga/assembly.hpp"
#include "hessiga/complex.hpp"
#include "hessiga/solve.hpp"

#include <iosfwd>
#include <vector>

namespace hessiga {

/// Level-k Hodge-Laplacian with a known solution u, its companion sigma = d*u and the load f.
struct HodgeCase {
  int k = 1;
  AffineGeometry geometry = AffineGeometry::identity();
  AnalyticField u;
  AnalyticField sigma;
  AnalyticField f;
};

HodgeCase make_hodge_case(int k, AnalyticField u, const AffineGeometry& geo);
/// The smooth test solutions: sin^4 products for k = 1, sin^2 products in every entry pattern otherwise.
AnalyticField manufactured_solution(int k);
HodgeCase manufactured_case(int k, const AffineGeometry& geo);

/// Smooth non-polynomial field of a level (1..4) that does not vanish on the boundary.
AnalyticField smooth_test_field(int level);
/// Relative L2 residual of D_k Pi^k w - Pi^{k+1} d^k w for k = 1, 2, 3.
double commuting_residual(int k, const ComplexSpaces& spaces, const AffineGeometry& geo, const AnalyticField& w,
                          int nodes_per_element = 0);

struct FieldError {
  double l2 = 0.0;
  double derivative = 0.0;  // L2 error of the level operator applied to the field
  double graph() const;
};

/// How the derivative of a discrete field is evaluated.
enum class DerivativeRoute {
  Matrix,  // coefficients mapped by the D matrices into the next level
  Direct   // operator applied to the basis functions at the quadrature points
};

/// Errors of a level-k discrete field against an exact one; the derivative term is
/// omitted for levels 0 and 4. q = 0 selects default_error_points.
FieldError compute_errors(int level, const Eigen::VectorXd& coeffs, const AnalyticField& exact,
                          const AffineGeometry& geo, const ComplexSpaces& spaces,
                          DerivativeRoute route = DerivativeRoute::Matrix, int q = 0);
/// Direct-route errors for an arbitrary layout (used for the naive discretization).
FieldError compute_errors(const FieldLayout& layout, const Eigen::VectorXd& coeffs, const AnalyticField& exact,
                          const AffineGeometry& geo, int q = 0);

struct ErrorReport {
  int k = 1;
  int p = 2;
  int r = 1;
  int N = 1;
  bool naive = false;
  double h = 0.0;
  int dofs = 0;
  int n_sigma = 0;
  int n_u = 0;
  FieldError sigma;
  FieldError u;
  SolveReport solver;
  double seconds = 0.0;
};

struct HodgeRun {
  ErrorReport report;
  Eigen::VectorXd sigma;
  Eigen::VectorXd u;
};

HodgeRun run_hodge(const HodgeCase& hc, int p, int r, int N, const SolveConfig& config = {});
ErrorReport solve_hodge(const HodgeCase& hc, int p, int r, int N, const SolveConfig& config = {});
/// Same mixed form with every component in S_p^{p-1}; k in {2, 3}.
HodgeRun run_hodge_naive(const HodgeCase& hc, int p, int N, const SolveConfig& config = {});
ErrorReport solve_hodge_naive(const HodgeCase& hc, int p, int N, const SolveConfig& config = {});

struct StudyRow {
  int level = 0;  // index within the N list
  ErrorReport report;
  double slope = 0.0;        // of the u graph-norm error; NaN on the first row of a degree
  double slope_sigma = 0.0;  // of the sigma graph-norm error
  double slope_u_l2 = 0.0;
};

double fitted_slope(double e_coarse, double e_fine, double h_coarse, double h_fine);

struct StudyOptions {
  bool naive = false;
  int threads = 1;
};

/// One row per (p, N), ordered by degree and then by the N list.
std::vector<StudyRow> convergence_study(int k, const std::vector<int>& degrees, const std::vector<int>& Ns,
                                        const AffineGeometry& geo, const SolveConfig& config = {},
                                        const StudyOptions& options = {});

/// CSV with header level,k,p,N,h,dofs,err_sigma_graph,err_u_graph,err_u_l2,slope,solver,residual,iters,seconds.
void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows, bool timing = true);
/// Human-readable rate table.
void write_rate_table(std::ostream& os, const std::vector<StudyRow>& rows);

} // namespace hessiga
