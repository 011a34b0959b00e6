#pragma once

#include "hessiga/geometry.hpp"
#include "hessiga/solve.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hessiga::cli {

enum ExitCode { kSuccess = 0, kPropertyFailure = 1, kUsageError = 2, kSolverFailure = 3 };

struct RunConfig {
  std::string command;
  int k = 1;
  std::vector<int> degrees{2};
  int regularity = -1;  // -1: p - 1
  std::vector<int> Ns{2};
  std::string geometry = "deformed-cube";
  SolveConfig solver;
  std::string out;
  bool naive = false;
  bool timing = true;
  int threads = 1;
  std::uint64_t seed = 1;
  double dt = 0.0;   // 0: h / 4
  double T = -1.0;   // < 0: use steps
  int steps = 100;
  bool zero_initial = false;
  double energy_tolerance = 1e-8;
};

/// "identity", "deformed-cube", twelve comma-separated reals (A row-major, then b), or a file holding them.
AffineGeometry parse_geometry(const std::string& arg);

/// Runs the command line; output goes to out and diagnostics to err. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_hodge(const RunConfig& cfg, std::ostream& out);
int cmd_leb(const RunConfig& cfg, std::ostream& out);

} // namespace hessiga::cli
