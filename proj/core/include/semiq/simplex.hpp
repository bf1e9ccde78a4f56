#pragma once

#include <vector>

namespace semiq {

// Dense linear program in the form
//   minimize   objective . x
//   subject to eq_rows x = eq_rhs
//              le_rows x <= le_rhs
//              x >= 0
struct LinearProgram {
  int num_vars = 0;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> le_rows;
  std::vector<double> le_rhs;
  std::vector<double> objective;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  long iterations = 0;
};

// Two-phase dense simplex. Entering variables are chosen by steepest
// reduced cost; after a run of degenerate pivots the rule switches to
// Bland's, which prevents cycling. Redundant equality rows (from
// overdetermined but consistent systems) are dropped after phase one.
LpResult solve_lp(const LinearProgram& lp, long max_iterations = 500000);

}  // namespace semiq
