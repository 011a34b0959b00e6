#include "cli.hpp"

#include "hessiga/complex.hpp"
#include "hessiga/errors.hpp"
#include "hessiga/leb.hpp"
#include "hessiga/problems.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace hessiga::cli {

namespace {

std::vector<double> parse_reals(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<double> v;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParameterError("not a number in geometry: " + tok);
    }
    if (used != tok.size()) throw ParameterError("not a number in geometry: " + tok);
    v.push_back(x);
  }
  return v;
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path);
  if (!file) throw ParameterError("cannot open output file " + path);
  return file;
}

void check_space_params(int p, int r, int N) {
  if (p < 2) throw ParameterError("degree must be at least 2");
  if (r < 1 || r > p - 1) throw ParameterError("regularity must satisfy 1 <= r <= p - 1");
  if (N < 1) throw ParameterError("N must be positive");
}

int regularity_for(const RunConfig& cfg, int p) { return cfg.regularity < 0 ? p - 1 : cfg.regularity; }

void report(std::ostream& out, bool ok, const std::string& name, const std::string& detail) {
  out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
}

std::string sci(double x) {
  std::ostringstream ss;
  ss << std::scientific << std::setprecision(2) << x;
  return ss.str();
}

} // namespace

AffineGeometry parse_geometry(const std::string& arg) {
  if (arg == "identity") return AffineGeometry::identity();
  if (arg == "deformed-cube") return AffineGeometry::deformed_cube();
  std::string text = arg;
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  const std::vector<double> values = parse_reals(text);
  if (values.size() != 12) throw ParameterError("geometry needs 12 reals (A row-major, then b)");
  try {
    return AffineGeometry::from_values(values);
  } catch (const GeometryError& e) {
    throw ParameterError(std::string("invalid geometry: ") + e.what());
  }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const AffineGeometry geo = parse_geometry(cfg.geometry);
  bool all = true;
  auto check = [&](bool ok, const std::string& name, const std::string& detail) {
    report(out, ok, name, detail);
    all = all && ok;
  };

  const PullbackResiduals pb = verify_commuting_pullbacks(geo, sine_test_fields(geo));
  check(std::max({pb.hessian, pb.curl, pb.divergence}) <= 1e-10, "pullback-commuting",
        "hess " + sci(pb.hessian) + " curl " + sci(pb.curl) + " div " + sci(pb.divergence));

  for (int p : cfg.degrees)
    for (int N : cfg.Ns) {
      const int r = regularity_for(cfg, p);
      check_space_params(p, r, N);
      const ComplexSpaces spaces(p, r, N);
      const std::string tag = "p=" + std::to_string(p) + " r=" + std::to_string(r) + " N=" + std::to_string(N);
      const SparseMatrix D1 = hessian_matrix(spaces), D2 = curl_matrix(spaces), D3 = div_matrix(spaces);
      const double c1 = scaled_product_norm(D2, D1), c2 = scaled_product_norm(D3, D2);
      check(c1 <= 1e-12, "curl-hess=0 " + tag, sci(c1));
      check(c2 <= 1e-12, "div-curl=0 " + tag, sci(c2));

      const ExactnessReport ex = verify_exactness(spaces);
      if (ex.checked) {
        std::ostringstream ss;
        ss << "ker D1 " << ex.kernel_d1 << ", defects " << ex.defect_level2 << ' ' << ex.defect_level3 << ' '
           << ex.defect_level4;
        check(ex.exact(), "exactness " + tag, ss.str());
      } else {
        out << "SKIP exactness " << tag << "  " << ex.message << '\n';
      }

      for (int k = 1; k <= 3; ++k) {
        const double res = commuting_residual(k, spaces, geo, smooth_test_field(k));
        check(res <= 1e-8, "commuting-square k=" + std::to_string(k) + " " + tag, sci(res));
      }
    }
  out << (all ? "all checks passed" : "some checks failed") << '\n';
  return all ? kSuccess : kPropertyFailure;
}

int cmd_hodge(const RunConfig& cfg, std::ostream& out) {
  if (cfg.k < 1 || cfg.k > 4) throw ParameterError("k must be in 1..4");
  if (cfg.naive && cfg.k != 2 && cfg.k != 3) throw ParameterError("--naive is defined only for k = 2, 3");
  if (cfg.degrees.empty() || cfg.Ns.empty()) throw ParameterError("degree and N lists must be nonempty");
  if (cfg.regularity >= 0 && cfg.naive) throw ParameterError("--naive uses r = p - 1");
  for (int p : cfg.degrees)
    for (int N : cfg.Ns) check_space_params(p, regularity_for(cfg, p), N);
  if (cfg.threads < 1) throw ParameterError("threads must be positive");
  cfg.solver.validate();
  const AffineGeometry geo = parse_geometry(cfg.geometry);

  std::vector<StudyRow> rows;
  if (cfg.regularity < 0) {
    rows = convergence_study(cfg.k, cfg.degrees, cfg.Ns, geo, cfg.solver, StudyOptions{cfg.naive, cfg.threads});
  } else {
    const HodgeCase hc = manufactured_case(cfg.k, geo);
    for (int p : cfg.degrees)
      for (std::size_t j = 0; j < cfg.Ns.size(); ++j) {
        StudyRow row;
        row.level = static_cast<int>(j);
        row.report = solve_hodge(hc, p, cfg.regularity, cfg.Ns[j], cfg.solver);
        if (j == 0) {
          row.slope = row.slope_sigma = row.slope_u_l2 = std::nan("");
        } else {
          const ErrorReport& a = rows.back().report;
          row.slope = fitted_slope(a.u.graph(), row.report.u.graph(), a.h, row.report.h);
          row.slope_sigma = fitted_slope(a.sigma.graph(), row.report.sigma.graph(), a.h, row.report.h);
          row.slope_u_l2 = fitted_slope(a.u.l2, row.report.u.l2, a.h, row.report.h);
        }
        rows.push_back(row);
      }
  }

  std::ofstream file;
  std::ostream& csv = open_output(cfg.out, file, out);
  write_study_csv(csv, rows, cfg.timing);
  if (&csv != &out) write_rate_table(out, rows);
  return kSuccess;
}

int cmd_leb(const RunConfig& cfg, std::ostream& out) {
  if (cfg.degrees.size() != 1 || cfg.Ns.size() != 1) throw ParameterError("leb takes a single degree and a single N");
  const int p = cfg.degrees[0], N = cfg.Ns[0], r = regularity_for(cfg, p);
  check_space_params(p, r, N);
  if (cfg.dt < 0.0 || !std::isfinite(cfg.dt)) throw ParameterError("dt must be positive");
  if (cfg.steps < 0) throw ParameterError("steps must be nonnegative");
  const AffineGeometry geo = parse_geometry(cfg.geometry);
  const double dt = cfg.dt > 0.0 ? cfg.dt : default_leb_step(geo, N);
  const int steps = cfg.T >= 0.0 ? static_cast<int>(std::lround(cfg.T / dt)) : cfg.steps;

  const ComplexSpaces spaces(p, r, N);
  const LebState init = cfg.zero_initial ? zero_leb_state(spaces) : random_leb_state(spaces, cfg.seed);
  const LebTrajectory traj = leb_evolve(init, dt, steps, build_leb_operator(spaces, geo));

  std::ofstream file;
  std::ostream& csv = open_output(cfg.out, file, out);
  csv << "t,energy,norm_sigma,norm_E,norm_B\n" << std::setprecision(17);
  for (std::size_t n = 0; n < traj.times.size(); ++n)
    csv << traj.times[n] << ',' << traj.energy[n] << ',' << traj.norms[n][0] << ',' << traj.norms[n][1] << ','
        << traj.norms[n][2] << '\n';

  const double e0 = traj.energy.front();
  double drift = 0.0;
  for (double e : traj.energy) drift = std::max(drift, e0 > 0.0 ? std::abs(e - e0) / e0 : std::abs(e));
  if (&csv != &out)
    out << "steps " << steps << ", dt " << dt << ", max relative energy drift " << sci(drift) << '\n';
  return drift <= cfg.energy_tolerance ? kSuccess : kPropertyFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string solver = "auto";

  CLI::App app{"Spline discretization of the 3D Hessian complex"};
  app.set_config("--config", "", "key = value file with [verify], [hodge] and [leb] sections");
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--degrees", cfg.degrees, "spline degrees p")->delimiter(',');
    sub->add_option("--N", cfg.Ns, "elements per direction")->delimiter(',');
    sub->add_option("--r", cfg.regularity, "regularity (default p - 1)");
    sub->add_option("--geometry", cfg.geometry, "identity | deformed-cube | 12 reals | file");
  };
  auto add_output = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "CSV output path (default stdout)"); };

  CLI::App* verify = app.add_subcommand("verify", "check the complex, exactness and commuting squares");
  add_common(verify);

  CLI::App* hodge = app.add_subcommand("hodge", "Hodge-Laplacian convergence study");
  add_common(hodge);
  add_output(hodge);
  hodge->add_option("--k", cfg.k, "level 1..4");
  hodge->add_option("--solver", solver, "direct | minres | auto");
  hodge->add_option("--tol", cfg.solver.tolerance, "relative residual tolerance");
  hodge->add_option("--maxit", cfg.solver.max_iterations, "MINRES iteration limit");
  hodge->add_flag("--naive", cfg.naive, "all components in S_p^(p-1) (k = 2, 3)");
  hodge->add_option("--threads", cfg.threads, "concurrent study cells");
  hodge->add_flag("!--timing", cfg.timing, "write 0 in the seconds column");
  hodge->get_option("--timing")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CLI::App* leb = app.add_subcommand("leb", "linearized Einstein-Bianchi evolution");
  add_common(leb);
  add_output(leb);
  leb->add_option("--dt", cfg.dt, "time step (default h/4)");
  leb->add_option("--steps", cfg.steps, "number of steps");
  leb->add_option("--T", cfg.T, "final time (overrides --steps)");
  leb->add_option("--seed", cfg.seed, "seed of the random initial data");
  leb->add_flag("--zero", cfg.zero_initial, "start from zero data");
  leb->add_option("--energy-tol", cfg.energy_tolerance, "allowed relative energy drift");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    cfg.solver.method = parse_solve_method(solver);
    if (verify->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg, out);
    }
    if (hodge->parsed()) {
      cfg.command = "hodge";
      return cmd_hodge(cfg, out);
    }
    cfg.command = "leb";
    return cmd_leb(cfg, out);
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const SingularityError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

} // namespace hessiga::cli
