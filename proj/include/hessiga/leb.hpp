#pragma once

#include "hessiga/assembly.hpp"
#include "hessiga/complex.hpp"

#include <cstdint>
#include <vector>

namespace hessiga {

/// Coefficients of (sigma, E, B) in levels 1, 2, 3 at time t.
struct LebState {
  double t = 0.0;
  Eigen::VectorXd sigma;
  Eigen::VectorXd E;
  Eigen::VectorXd B;
};

/// M y' = S y with M = diag(M1, M2, M3) and the skew coupling
///   <sigma', tau> = <E, hess tau>,  <E', F> = -<hess sigma, F> - <B, curl F>,  <B', G> = <curl E, G>.
struct LebOperator {
  SparseMatrix mass;
  SparseMatrix skew;
  int n_sigma = 0;
  int n_E = 0;
  int n_B = 0;

  Eigen::VectorXd stack(const LebState& s) const;
  LebState unstack(const Eigen::VectorXd& y, double t) const;
  double energy(const LebState& s) const;
  /// Mass-matrix norms of sigma, E and B.
  std::array<double, 3> norms(const LebState& s) const;
};

LebOperator build_leb_operator(const ComplexSpaces& spaces, const AffineGeometry& geo);

LebState zero_leb_state(const ComplexSpaces& spaces);
/// Coefficients uniform in [-1, 1] from a seeded generator.
LebState random_leb_state(const ComplexSpaces& spaces, std::uint64_t seed);

struct LebTrajectory {
  std::vector<LebState> states;  // empty unless requested
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<std::array<double, 3>> norms;
};

/// Implicit midpoint steps of size dt; the step matrix is factored once.
LebTrajectory leb_evolve(const LebState& initial, double dt, int steps, const LebOperator& op,
                         bool keep_states = false);
/// Steps of size dt up to the final time T (the last step count is rounded to the nearest integer).
LebTrajectory leb_evolve(const LebState& initial, double dt, double T, const ComplexSpaces& spaces,
                         const AffineGeometry& geo, bool keep_states = false);

/// Time derivative y' = M^{-1} S y of a state.
LebState leb_rate(const LebState& s, const LebOperator& op);

/// Default step h/4 for the physical element diameter h.
double default_leb_step(const AffineGeometry& geo, int N);

} // namespace hessiga
