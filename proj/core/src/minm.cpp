#include "semiq/minm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "semiq/errors.hpp"
#include "semiq/metrics.hpp"

namespace semiq {

const char* to_string(StrategyMode m) {
  return m == StrategyMode::kLambdaOnly ? "lambda_only" : "setting_dependent";
}

StrategyMode strategy_mode_from_string(const std::string& name) {
  if (name == "lambda_only") return StrategyMode::kLambdaOnly;
  if (name == "setting_dependent") return StrategyMode::kSettingDependent;
  throw ValidationError("unknown strategy mode '" + name + "'");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

StrategySet enumerate_strategies(int num_s, int num_t, int num_x, int num_y, StrategyMode mode) {
  if (num_s < 1 || num_t < 1 || num_x < 1 || num_y < 1) {
    throw ValidationError("strategy enumeration needs positive set sizes");
  }
  StrategySet out{mode, num_s, num_t, num_x, num_y, {}};
  if (mode == StrategyMode::kLambdaOnly) {
    out.strategies.reserve(static_cast<std::size_t>(num_x) * num_y);
    for (int x = 0; x < num_x; ++x) {
      for (int y = 0; y < num_y; ++y) {
        out.strategies.push_back(Strategy{std::vector<int>(num_s, x), std::vector<int>(num_t, y)});
      }
    }
    return out;
  }

  double count = std::pow(static_cast<double>(num_x), num_s) *
                 std::pow(static_cast<double>(num_y), num_t);
  if (count > 1e6) {
    throw ValidationError("setting-dependent strategy space exceeds the 10^6 guard (" +
                          std::to_string(count) + ")");
  }

  std::vector<std::vector<int>> fs, gs;
  std::vector<int> cur(num_s, 0);
  while (true) {
    fs.push_back(cur);
    int k = num_s - 1;
    while (k >= 0 && ++cur[k] == num_x) cur[k--] = 0;
    if (k < 0) break;
  }
  cur.assign(num_t, 0);
  while (true) {
    gs.push_back(cur);
    int k = num_t - 1;
    while (k >= 0 && ++cur[k] == num_y) cur[k--] = 0;
    if (k < 0) break;
  }
  out.strategies.reserve(fs.size() * gs.size());
  for (const auto& f : fs) {
    for (const auto& g : gs) out.strategies.push_back(Strategy{f, g});
  }
  return out;
}

namespace {

constexpr double kRowEqTol = 1e-12;
// Cap on tableau entries so a misshapen request fails fast instead of
// exhausting memory.
constexpr double kMaxTableauEntries = 4e7;

struct CellGrouping {
  std::vector<int> group_of_cell;          // per (si*nT+ti)
  std::vector<std::size_t> representative; // one cell per group
  int num_groups = 0;
  bool reduced = false;                    // true when cells share variables
};

std::vector<double> target_row(const CorrelationTable& t, std::size_t si, std::size_t ti) {
  std::vector<double> row(t.num_x() * t.num_y());
  for (std::size_t xi = 0; xi < t.num_x(); ++xi) {
    for (std::size_t yi = 0; yi < t.num_y(); ++yi) {
      row[xi * t.num_y() + yi] = t.at_index(xi, yi, si, ti);
    }
  }
  return row;
}

bool rows_equal(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kRowEqTol) return false;
  }
  return true;
}

CellGrouping group_cells(const CorrelationTable& target, StrategyMode mode) {
  const std::size_t n_s = target.num_s();
  const std::size_t n_t = target.num_t();
  const std::size_t cells = n_s * n_t;

  std::vector<std::vector<double>> rows(cells);
  for (std::size_t si = 0; si < n_s; ++si) {
    for (std::size_t ti = 0; ti < n_t; ++ti) rows[si * n_t + ti] = target_row(target, si, ti);
  }

  CellGrouping grouping;
  grouping.group_of_cell.assign(cells, -1);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t r = 0; r < grouping.representative.size(); ++r) {
      if (rows_equal(rows[c], rows[grouping.representative[r]])) {
        grouping.group_of_cell[c] = static_cast<int>(r);
        break;
      }
    }
    if (grouping.group_of_cell[c] < 0) {
      grouping.group_of_cell[c] = static_cast<int>(grouping.representative.size());
      grouping.representative.push_back(c);
    }
  }
  grouping.num_groups = static_cast<int>(grouping.representative.size());
  grouping.reduced = grouping.num_groups < static_cast<int>(cells);

  if (mode == StrategyMode::kLambdaOnly || !grouping.reduced) {
    return grouping;
  }

  // Shared variables are only sound in setting-dependent mode when the
  // grouping is an orbit partition of a target symmetry: a single group, or
  // the [s = t] split over a shared label set.
  bool valid = grouping.num_groups == 1;
  if (!valid && grouping.num_groups == 2) {
    std::set<int> s_set(target.s_labels().begin(), target.s_labels().end());
    std::set<int> t_set(target.t_labels().begin(), target.t_labels().end());
    if (s_set == t_set) {
      valid = true;
      int diag_group = -1, off_group = -1;
      for (std::size_t si = 0; si < n_s && valid; ++si) {
        for (std::size_t ti = 0; ti < n_t && valid; ++ti) {
          const bool same = target.s_labels()[si] == target.t_labels()[ti];
          int& slot = same ? diag_group : off_group;
          const int g = grouping.group_of_cell[si * n_t + ti];
          if (slot < 0) {
            slot = g;
          } else if (slot != g) {
            valid = false;
          }
        }
      }
      if (diag_group < 0 || off_group < 0 || diag_group == off_group) valid = false;
    }
  }
  if (!valid) {
    // Fall back to fully independent distributions per setting pair.
    grouping.group_of_cell.clear();
    grouping.representative.clear();
    for (std::size_t c = 0; c < cells; ++c) {
      grouping.group_of_cell.push_back(static_cast<int>(c));
      grouping.representative.push_back(c);
    }
    grouping.num_groups = static_cast<int>(cells);
    grouping.reduced = false;
  }
  return grouping;
}

}  // namespace

LpSolution min_M(const CorrelationTable& target, StrategyMode mode) {
  const std::size_t n_s = target.num_s();
  const std::size_t n_t = target.num_t();
  const std::size_t n_x = target.num_x();
  const std::size_t n_y = target.num_y();

  const StrategySet strategies =
      enumerate_strategies(static_cast<int>(n_s), static_cast<int>(n_t), static_cast<int>(n_x),
                           static_cast<int>(n_y), mode);
  const std::size_t n_strat = strategies.strategies.size();
  const CellGrouping grouping = group_cells(target, mode);
  const int n_groups = grouping.num_groups;

  // Variable layout: [0] = M, then p(λ|group) blocks, then (d+, d-) blocks
  // per unordered group pair.
  const std::size_t p_base = 1;
  const std::size_t n_pairs = static_cast<std::size_t>(n_groups) * (n_groups - 1) / 2;
  const std::size_t d_base = p_base + static_cast<std::size_t>(n_groups) * n_strat;
  const std::size_t num_vars = d_base + n_pairs * n_strat * 2;

  auto p_var = [&](int group, std::size_t li) {
    return p_base + static_cast<std::size_t>(group) * n_strat + li;
  };
  auto pair_index = [&](int g1, int g2) {
    // g1 < g2
    return static_cast<std::size_t>(g1) * (2 * n_groups - g1 - 1) / 2 + (g2 - g1 - 1);
  };
  auto d_var = [&](std::size_t pair, std::size_t li, bool plus) {
    return d_base + (pair * n_strat + li) * 2 + (plus ? 0 : 1);
  };

  LinearProgram lp;
  lp.num_vars = static_cast<int>(num_vars);
  lp.objective.assign(num_vars, 0.0);
  lp.objective[0] = 1.0;

  // Normalization per group.
  for (int g = 0; g < n_groups; ++g) {
    std::vector<double> row(num_vars, 0.0);
    for (std::size_t li = 0; li < n_strat; ++li) row[p_var(g, li)] = 1.0;
    lp.eq_rows.push_back(std::move(row));
    lp.eq_rhs.push_back(1.0);
  }

  // Exact reproduction. In λ-only mode the coefficients are setting
  // independent, so one representative cell per group suffices; otherwise
  // every cell contributes its own constraints.
  std::vector<std::size_t> repro_cells;
  if (mode == StrategyMode::kLambdaOnly) {
    repro_cells = grouping.representative;
  } else {
    for (std::size_t c = 0; c < n_s * n_t; ++c) repro_cells.push_back(c);
  }
  for (std::size_t cell : repro_cells) {
    const std::size_t si = cell / n_t;
    const std::size_t ti = cell % n_t;
    const int g = grouping.group_of_cell[cell];
    for (std::size_t xi = 0; xi < n_x; ++xi) {
      for (std::size_t yi = 0; yi < n_y; ++yi) {
        std::vector<double> row(num_vars, 0.0);
        for (std::size_t li = 0; li < n_strat; ++li) {
          const auto& strat = strategies.strategies[li];
          if (strat.f[si] == static_cast<int>(xi) && strat.g[ti] == static_cast<int>(yi)) {
            row[p_var(g, li)] = 1.0;
          }
        }
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(target.at_index(xi, yi, si, ti));
      }
    }
  }

  // L1 linearization per group pair: p_g - p_g' = d+ - d-, sum(d+ + d-) <= M.
  for (int g1 = 0; g1 < n_groups; ++g1) {
    for (int g2 = g1 + 1; g2 < n_groups; ++g2) {
      const std::size_t pair = pair_index(g1, g2);
      for (std::size_t li = 0; li < n_strat; ++li) {
        std::vector<double> row(num_vars, 0.0);
        row[p_var(g1, li)] = 1.0;
        row[p_var(g2, li)] = -1.0;
        row[d_var(pair, li, true)] = -1.0;
        row[d_var(pair, li, false)] = 1.0;
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(0.0);
      }
      std::vector<double> cap(num_vars, 0.0);
      for (std::size_t li = 0; li < n_strat; ++li) {
        cap[d_var(pair, li, true)] = 1.0;
        cap[d_var(pair, li, false)] = 1.0;
      }
      cap[0] = -1.0;
      lp.le_rows.push_back(std::move(cap));
      lp.le_rhs.push_back(0.0);
    }
  }

  const double tableau_entries =
      static_cast<double>(lp.eq_rows.size() + lp.le_rows.size() + 2) *
      static_cast<double>(num_vars + lp.eq_rows.size() + 2 * lp.le_rows.size());
  if (tableau_entries > kMaxTableauEntries) {
    throw ValidationError(
        "min_M problem too large for the dense solver (" + std::to_string(lp.eq_rows.size()) +
        " equality rows, " + std::to_string(num_vars) +
        " variables); use lambda_only mode or a target with repeated rows");
  }

  const LpResult lp_result = solve_lp(lp);

  LpSolution solution;
  solution.lp_iterations = lp_result.iterations;
  switch (lp_result.status) {
    case LpStatus::kOptimal:
      solution.status = SolveStatus::kOptimal;
      break;
    case LpStatus::kInfeasible:
      solution.status = SolveStatus::kInfeasible;
      return solution;
    case LpStatus::kUnbounded:
      throw NumericError("min_M LP reported unbounded, which the formulation forbids");
    case LpStatus::kIterationLimit:
      solution.status = SolveStatus::kIterationLimit;
      return solution;
  }
  solution.m_star = std::max(0.0, lp_result.objective);

  // Assemble the model: drop strategies that carry no mass anywhere.
  std::vector<bool> used(n_strat, false);
  for (int g = 0; g < n_groups; ++g) {
    for (std::size_t li = 0; li < n_strat; ++li) {
      if (lp_result.x[p_var(g, li)] > 1e-14) used[li] = true;
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t li = 0; li < n_strat; ++li) {
    if (used[li]) kept.push_back(li);
  }
  if (kept.empty()) kept.push_back(0);

  std::vector<std::string> lambda_labels;
  std::vector<std::vector<int>> f_rows, g_rows;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    lambda_labels.push_back("l" + std::to_string(k + 1));
    const auto& strat = strategies.strategies[kept[k]];
    std::vector<int> f_row(n_s), g_row(n_t);
    for (std::size_t si = 0; si < n_s; ++si) f_row[si] = target.x_labels()[strat.f[si]];
    for (std::size_t ti = 0; ti < n_t; ++ti) g_row[ti] = target.y_labels()[strat.g[ti]];
    f_rows.push_back(std::move(f_row));
    g_rows.push_back(std::move(g_row));
  }

  std::vector<std::vector<double>> cond(n_s * n_t);
  for (std::size_t cell = 0; cell < n_s * n_t; ++cell) {
    const int g = grouping.group_of_cell[cell];
    std::vector<double> dist(kept.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      dist[k] = std::max(0.0, lp_result.x[p_var(g, kept[k])]);
      sum += dist[k];
    }
    if (sum <= 0.0) throw NumericError("LP produced an empty distribution");
    for (auto& v : dist) v /= sum;
    cond[cell] = std::move(dist);
  }

  solution.model.emplace(std::move(lambda_labels), target.s_labels(), target.t_labels(),
                         target.x_labels(), target.y_labels(), std::move(cond), std::move(f_rows),
                         std::move(g_rows), mode == StrategyMode::kSettingDependent);
  return solution;
}

bool certify(const LpSolution& solution, const CorrelationTable& target, double tol) {
  if (solution.status != SolveStatus::kOptimal || !solution.model) return false;
  const CorrelationTable reproduced = model_table(*solution.model);
  if (reproduced.max_abs_difference(target) > tol) return false;
  return std::abs(variational_M(*solution.model) - solution.m_star) <= tol;
}

}  // namespace semiq
