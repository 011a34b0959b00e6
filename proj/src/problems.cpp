#include "hessiga/problems.hpp"

#include "hessiga/errors.hpp"
#include "hessiga/fields.hpp"
#include "hessiga/projection.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace hessiga {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int error_points(int p, int q) { return q > 0 ? q : default_error_points(p); }

bool has_derivative(int level) { return level >= 1 && level <= 3; }

FieldError field_error(const GridField& discrete, const GridField* discrete_d, const AnalyticField& exact,
                       const AffineGeometry& geo, const ErrorQuadrature& quad) {
  FieldError err;
  const AnalyticGridField e(exact);
  err.l2 = l2_distance(discrete, &e, quad, geo);
  if (discrete_d) {
    const AnalyticGridField d(apply_d(exact, geo));
    err.derivative = l2_distance(*discrete_d, &d, quad, geo);
  }
  return err;
}

} // namespace

HodgeCase make_hodge_case(int k, AnalyticField u, const AffineGeometry& geo) {
  if (k < 1 || k > 4) throw ParameterError("level k must be in 1..4");
  if (u.level != k) throw ParameterError("exact solution must live on level k");
  HodgeCase hc;
  hc.k = k;
  hc.geometry = geo;
  hc.sigma = dual_solution(k, u, geo);
  hc.f = hodge_rhs(k, u, geo);
  hc.u = std::move(u);
  return hc;
}

AnalyticField manufactured_solution(int k) {
  const ScalarExpr v = ScalarExpr::sine_product(2);
  switch (k) {
  case 1: return AnalyticField::scalar(ScalarExpr::sine_product(4), 1);
  case 2: {
    MatrixExpr S;
    S.fill(v);
    return AnalyticField::matrix(S, 2);
  }
  case 3: {
    const ScalarExpr zero;
    return AnalyticField::matrix({v, v, v, zero, v, zero, zero, zero, -2.0 * v}, 3);
  }
  case 4: return AnalyticField::vector({v, v, v});
  default: throw ParameterError("level k must be in 1..4");
  }
}

HodgeCase manufactured_case(int k, const AffineGeometry& geo) {
  return make_hodge_case(k, manufactured_solution(k), geo);
}

AnalyticField smooth_test_field(int level) {
  auto f = [](int seed) {
    const double a = 1.0 + 0.1 * seed;
    ScalarExpr g = ScalarExpr::term(a, {1, 0, seed % 3}, {0, 1, 1}, {0, 0, 2});
    g += ScalarExpr::term(0.5, {0, 1, 0}, {2, 0, seed % 2}, {1, 0, 0});
    g += ScalarExpr::monomial(0.3 - 0.05 * seed, 1, seed % 2, 2);
    g += ScalarExpr::term(0.2, {0, 0, 1}, {0, 0, 0}, {0, 1, seed % 3});
    return g;
  };
  switch (level) {
  case 1: return AnalyticField::scalar(f(0), 1);
  case 2:
  case 3: {
    MatrixExpr m;
    for (int i = 0; i < 9; ++i) m[i] = f(i);
    return AnalyticField::matrix(level == 2 ? sym(m) : dev(m), level);
  }
  case 4: return AnalyticField::vector({f(0), f(1), f(2)});
  default: throw ParameterError("test fields exist for levels 1..4");
  }
}

double commuting_residual(int k, const ComplexSpaces& spaces, const AffineGeometry& geo, const AnalyticField& w,
                          int nodes_per_element) {
  if (k < 1 || k > 3) throw ParameterError("commuting squares exist for k = 1, 2, 3");
  const Eigen::VectorXd lhs = differential_matrix(level_operator(k), spaces.level(k), spaces.level(k + 1)) *
                              physical_project(k, spaces, geo, w, nodes_per_element);
  const Eigen::VectorXd rhs = physical_project(k + 1, spaces, geo, apply_d(w, geo), nodes_per_element);
  const FieldLayout& target = spaces.level(k + 1);
  const ErrorQuadrature quad = error_quadrature(spaces.elements(), default_error_points(spaces.degree()));
  const DiscreteGridField diff(target, lhs - rhs, geo);
  const DiscreteGridField ref(target, rhs, geo);
  return l2_distance(diff, nullptr, quad, geo) / l2_distance(ref, nullptr, quad, geo);
}

double FieldError::graph() const { return std::sqrt(l2 * l2 + derivative * derivative); }

FieldError compute_errors(int level, const Eigen::VectorXd& coeffs, const AnalyticField& exact,
                          const AffineGeometry& geo, const ComplexSpaces& spaces, DerivativeRoute route, int q) {
  if (level < 0 || level > 4) throw ParameterError("level must be in 0..4");
  if (exact.level != level) throw ParameterError("exact field level does not match");
  const FieldLayout& layout = spaces.level(level);
  if (coeffs.size() != layout.size()) throw ParameterError("coefficient vector does not match the level");
  const ErrorQuadrature quad = error_quadrature(spaces.elements(), error_points(spaces.degree(), q));
  const DiscreteGridField value(layout, coeffs, geo);
  if (!has_derivative(level)) return field_error(value, nullptr, exact, geo, quad);

  if (route == DerivativeRoute::Matrix) {
    const SparseMatrix D = differential_matrix(level_operator(level), layout, spaces.level(level + 1));
    const DiscreteGridField d(spaces.level(level + 1), D * coeffs, geo);
    return field_error(value, &d, exact, geo, quad);
  }
  const DiscreteGridField d(layout, coeffs, geo, level_operator(level), level + 1);
  return field_error(value, &d, exact, geo, quad);
}

FieldError compute_errors(const FieldLayout& layout, const Eigen::VectorXd& coeffs, const AnalyticField& exact,
                          const AffineGeometry& geo, int q) {
  if (layout.level() < 1) throw ParameterError("direct-route errors need a spline layout");
  if (exact.level != layout.level()) throw ParameterError("exact field level does not match");
  const SplineSpace& s = layout.component(0).axes[0];
  const ErrorQuadrature quad = error_quadrature(s.elements(), error_points(s.degree(), q));
  const DiscreteGridField value(layout, coeffs, geo);
  if (!has_derivative(layout.level())) return field_error(value, nullptr, exact, geo, quad);
  const DiscreteGridField d(layout, coeffs, geo, level_operator(layout.level()), layout.level() + 1);
  return field_error(value, &d, exact, geo, quad);
}

HodgeRun run_hodge(const HodgeCase& hc, int p, int r, int N, const SolveConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  const ComplexSpaces spaces(p, r, N);
  const AffineGeometry& geo = hc.geometry;

  SolveResult sol;
  int n_sigma = 0, n_u = 0;
  {
    const SaddleSystem sys = build_saddle_system(hc.k, spaces, geo, hc.f);
    n_sigma = sys.n_sigma;
    n_u = sys.n_u;
    sol = solve_symmetric(sys.matrix, sys.rhs, config);
  }

  HodgeRun run;
  run.sigma = sol.x.head(n_sigma);
  run.u = sol.x.tail(n_u);
  ErrorReport& rep = run.report;
  rep.k = hc.k;
  rep.p = p;
  rep.r = r;
  rep.N = N;
  rep.h = geo.element_diameter(N);
  rep.n_sigma = n_sigma;
  rep.n_u = n_u;
  rep.dofs = n_sigma + n_u;
  rep.solver = sol.report;
  rep.sigma = compute_errors(hc.k - 1, run.sigma, hc.sigma, geo, spaces);
  rep.u = compute_errors(hc.k, run.u, hc.u, geo, spaces);
  rep.seconds = seconds_since(t0);
  return run;
}

ErrorReport solve_hodge(const HodgeCase& hc, int p, int r, int N, const SolveConfig& config) {
  return run_hodge(hc, p, r, N, config).report;
}

HodgeRun run_hodge_naive(const HodgeCase& hc, int p, int N, const SolveConfig& config) {
  if (hc.k != 2 && hc.k != 3) throw ParameterError("the naive discretization is defined for k = 2, 3");
  config.validate();
  const auto t0 = Clock::now();
  const int r = p - 1;
  const AffineGeometry& geo = hc.geometry;
  const FieldLayout sigma_layout = naive_layout(hc.k - 1, p, r, N);
  const FieldLayout u_layout = naive_layout(hc.k, p, r, N);

  SolveResult sol;
  {
    const SaddleBlocks blocks = naive_hodge_blocks(hc.k, p, r, N, geo);
    const SparseMatrix A = saddle_matrix(blocks);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
    rhs.tail(u_layout.size()) = load_vector(u_layout, hc.f, geo);
    sol = solve_symmetric(A, rhs, config);
  }

  HodgeRun run;
  run.sigma = sol.x.head(sigma_layout.size());
  run.u = sol.x.tail(u_layout.size());
  ErrorReport& rep = run.report;
  rep.k = hc.k;
  rep.p = p;
  rep.r = r;
  rep.N = N;
  rep.naive = true;
  rep.h = geo.element_diameter(N);
  rep.n_sigma = sigma_layout.size();
  rep.n_u = u_layout.size();
  rep.dofs = rep.n_sigma + rep.n_u;
  rep.solver = sol.report;
  rep.sigma = compute_errors(sigma_layout, run.sigma, hc.sigma, geo);
  rep.u = compute_errors(u_layout, run.u, hc.u, geo);
  rep.seconds = seconds_since(t0);
  return run;
}

ErrorReport solve_hodge_naive(const HodgeCase& hc, int p, int N, const SolveConfig& config) {
  return run_hodge_naive(hc, p, N, config).report;
}

double fitted_slope(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::vector<StudyRow> convergence_study(int k, const std::vector<int>& degrees, const std::vector<int>& Ns,
                                        const AffineGeometry& geo, const SolveConfig& config,
                                        const StudyOptions& options) {
  if (degrees.empty() || Ns.empty()) throw ParameterError("degree and N lists must be nonempty");
  if (options.naive && k != 2 && k != 3) throw ParameterError("the naive discretization is defined for k = 2, 3");
  const HodgeCase hc = manufactured_case(k, geo);

  std::vector<StudyRow> rows(degrees.size() * Ns.size());
  for (std::size_t i = 0; i < degrees.size(); ++i)
    for (std::size_t j = 0; j < Ns.size(); ++j) {
      StudyRow& row = rows[i * Ns.size() + j];
      row.level = static_cast<int>(j);
      row.report.p = degrees[i];
      row.report.N = Ns[j];
    }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t idx; (idx = next++) < rows.size();) {
      try {
        const int p = rows[idx].report.p, N = rows[idx].report.N;
        rows[idx].report = options.naive ? solve_hodge_naive(hc, p, N, config) : solve_hodge(hc, p, p - 1, N, config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(options.threads, 1, static_cast<int>(rows.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    StudyRow& row = rows[idx];
    if (row.level == 0) {
      row.slope = row.slope_sigma = row.slope_u_l2 = nan;
      continue;
    }
    const ErrorReport& a = rows[idx - 1].report;
    const ErrorReport& b = row.report;
    row.slope = fitted_slope(a.u.graph(), b.u.graph(), a.h, b.h);
    row.slope_sigma = fitted_slope(a.sigma.graph(), b.sigma.graph(), a.h, b.h);
    row.slope_u_l2 = fitted_slope(a.u.l2, b.u.l2, a.h, b.h);
  }
  return rows;
}

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows, bool timing) {
  os << "level,k,p,N,h,dofs,err_sigma_graph,err_u_graph,err_u_l2,slope,solver,residual,iters,seconds\n";
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(10);
  for (const auto& row : rows) {
    const ErrorReport& r = row.report;
    os << row.level << ',' << r.k << ',' << r.p << ',' << r.N << ',' << r.h << ',' << r.dofs << ','
       << r.sigma.graph() << ',' << r.u.graph() << ',' << r.u.l2 << ',';
    if (std::isnan(row.slope)) os << "nan";
    else os << row.slope;
    os << ',' << to_string(r.solver.method) << ',' << r.solver.residual << ',' << r.solver.iterations << ','
       << (timing ? r.seconds : 0.0) << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

void write_rate_table(std::ostream& os, const std::vector<StudyRow>& rows) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::left << std::setw(4) << "p" << std::setw(5) << "N" << std::setw(11) << "h" << std::setw(9) << "dofs"
     << std::setw(13) << "err_sigma" << std::setw(8) << "rate" << std::setw(13) << "err_u" << std::setw(8) << "rate"
     << std::setw(13) << "err_u_l2" << "residual\n";
  for (const auto& row : rows) {
    const ErrorReport& r = row.report;
    auto rate = [&](double s) {
      std::ostringstream ss;
      if (std::isnan(s)) ss << "-";
      else ss << std::fixed << std::setprecision(2) << s;
      return ss.str();
    };
    os << std::left << std::setw(4) << r.p << std::setw(5) << r.N << std::setw(11) << std::setprecision(4) << r.h
       << std::setw(9) << r.dofs << std::scientific << std::setprecision(3) << std::setw(13) << r.sigma.graph()
       << std::setw(8) << rate(row.slope_sigma) << std::setw(13) << r.u.graph() << std::setw(8) << rate(row.slope)
       << std::setw(13) << r.u.l2 << std::setprecision(1) << r.solver.residual << std::defaultfloat << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

} // namespace hessiga
