#pragma once

#include <optional>
#include <vector>

#include "semiq/game.hpp"
#include "semiq/mdl.hpp"
#include "semiq/simplex.hpp"

namespace semiq {

enum class StrategyMode { kLambdaOnly, kSettingDependent };

const char* to_string(StrategyMode m);
StrategyMode strategy_mode_from_string(const std::string& name);

// One deterministic strategy: outcome indices per setting. In λ-only mode
// both maps are constant.
struct Strategy {
  std::vector<int> f;  // [si] -> x index
  std::vector<int> g;  // [ti] -> y index
};

struct StrategySet {
  StrategyMode mode;
  int num_s, num_t, num_x, num_y;
  std::vector<Strategy> strategies;
};

// Exhaustive enumeration: |X|·|Y| constant pairs in λ-only mode,
// |X|^|S| · |Y|^|T| response-function pairs in setting-dependent mode
// (guarded at 10^6).
StrategySet enumerate_strategies(int num_s, int num_t, int num_x, int num_y, StrategyMode mode);

enum class SolveStatus { kOptimal, kInfeasible, kIterationLimit };

const char* to_string(SolveStatus s);

struct LpSolution {
  SolveStatus status;
  double m_star = 0.0;
  std::optional<MdlModel> model;  // present when status is optimal
  long lp_iterations = 0;
};

// Minimizes the variational-distance measure M over measurement-dependent
// deterministic models that reproduce the target table exactly, via an LP
// over p(λ|s,t) with paired slack variables linearizing the L1 terms.
//
// Setting pairs with identical target rows share their distribution
// variables when that identification provably loses no optimality (always in
// λ-only mode; in setting-dependent mode when the row pattern is the
// [s = t] two-group structure or a single group). Otherwise the full
// pairwise constraint set is used.
LpSolution min_M(const CorrelationTable& target, StrategyMode mode);

// Independently recomputes the model's table and variational M and compares
// them against the solution's claims.
bool certify(const LpSolution& solution, const CorrelationTable& target, double tol = 1e-9);

}  // namespace semiq
