#include "semiq/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semiq/errors.hpp"

namespace semiq {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kEps = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr int kDegenerateStall = 100;

class Tableau {
 public:
  Tableau(const LinearProgram& lp) {
    const std::size_t m_le = lp.le_rows.size();
    const std::size_t m_eq = lp.eq_rows.size();
    m_ = m_le + m_eq;
    n_structural_ = static_cast<std::size_t>(lp.num_vars) + m_le;  // x + slacks
    n_total_ = n_structural_ + m_;                                 // + artificials
    rows_.assign(m_, std::vector<double>(n_total_ + 1, 0.0));
    basis_.assign(m_, 0);

    for (std::size_t i = 0; i < m_le; ++i) {
      auto& row = rows_[i];
      for (int j = 0; j < lp.num_vars; ++j) row[j] = lp.le_rows[i][j];
      row[lp.num_vars + i] = 1.0;  // slack
      row[n_total_] = lp.le_rhs[i];
    }
    for (std::size_t i = 0; i < m_eq; ++i) {
      auto& row = rows_[m_le + i];
      for (int j = 0; j < lp.num_vars; ++j) row[j] = lp.eq_rows[i][j];
      row[n_total_] = lp.eq_rhs[i];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (rows_[i][n_total_] < 0.0) {
        for (auto& v : rows_[i]) v = -v;
      }
      rows_[i][n_structural_ + i] = 1.0;  // artificial
      basis_[i] = n_structural_ + i;
    }
  }

  // Runs simplex on the given cost vector (length n_total_). Returns false
  // if unbounded.
  bool optimize(const std::vector<double>& cost, long max_iterations, long& iterations,
                bool forbid_artificials) {
    // Reduced costs: z[j] = cost[j] - sum_i cost[basis_[i]] * rows_[i][j].
    obj_.assign(n_total_ + 1, 0.0);
    for (std::size_t j = 0; j <= n_total_; ++j) {
      double z = (j < n_total_) ? cost[j] : 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb != 0.0) z -= cb * rows_[i][j];
      }
      obj_[j] = z;
    }

    int degenerate_run = 0;
    bool bland = false;
    while (iterations < max_iterations) {
      // Entering column.
      std::size_t enter = n_total_;
      if (bland) {
        for (std::size_t j = 0; j < n_total_; ++j) {
          if (forbid_artificials && j >= n_structural_) continue;
          if (obj_[j] < -kEps) {
            enter = j;
            break;
          }
        }
      } else {
        double best = -kEps;
        for (std::size_t j = 0; j < n_total_; ++j) {
          if (forbid_artificials && j >= n_structural_) continue;
          if (obj_[j] < best) {
            best = obj_[j];
            enter = j;
          }
        }
      }
      if (enter == n_total_) return true;  // optimal

      // Ratio test (Bland tie-break on the basic variable index).
      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = rows_[i][enter];
        if (a > kEps) {
          const double ratio = rows_[i][n_total_] / a;
          if (ratio < best_ratio - kEps ||
              (ratio < best_ratio + kEps && (leave == m_ || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == m_) return false;  // unbounded

      if (best_ratio < kEps) {
        if (++degenerate_run > kDegenerateStall) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      pivot(leave, enter);
      ++iterations;
    }
    return true;  // caller checks the iteration budget
  }

  double objective_value(const std::vector<double>& cost) const {
    double v = 0.0;
    for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * rows_[i][n_total_];
    return v;
  }

  // Pivot basic artificials out; drop rows that turn out redundant.
  void eliminate_artificials() {
    for (std::size_t i = 0; i < m_;) {
      if (basis_[i] < n_structural_) {
        ++i;
        continue;
      }
      std::size_t enter = n_total_;
      for (std::size_t j = 0; j < n_structural_; ++j) {
        if (std::abs(rows_[i][j]) > kEps) {
          enter = j;
          break;
        }
      }
      if (enter == n_total_) {
        rows_.erase(rows_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
        --m_;
      } else {
        pivot(i, enter);
        ++i;
      }
    }
  }

  std::vector<double> solution(int num_vars) const {
    std::vector<double> x(num_vars, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < static_cast<std::size_t>(num_vars)) {
        x[basis_[i]] = rows_[i][n_total_];
      }
    }
    return x;
  }

  std::size_t n_structural() const { return n_structural_; }
  std::size_t n_total() const { return n_total_; }

 private:
  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows_[r];
    const double inv = 1.0 / prow[c];
    for (auto& v : prow) v *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = rows_[i][c];
      if (f == 0.0) continue;
      auto& row = rows_[i];
      for (std::size_t j = 0; j <= n_total_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    const double f = obj_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= n_total_; ++j) obj_[j] -= f * prow[j];
      obj_[c] = 0.0;
    }
    basis_[r] = c;
  }

  std::size_t m_ = 0;
  std::size_t n_structural_ = 0;
  std::size_t n_total_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, long max_iterations) {
  if (lp.num_vars <= 0) throw ValidationError("LP needs at least one variable");
  if (static_cast<int>(lp.objective.size()) != lp.num_vars) {
    throw ValidationError("LP objective length must equal num_vars");
  }
  for (const auto& row : lp.eq_rows) {
    if (static_cast<int>(row.size()) != lp.num_vars) {
      throw ValidationError("LP equality row length must equal num_vars");
    }
  }
  for (const auto& row : lp.le_rows) {
    if (static_cast<int>(row.size()) != lp.num_vars) {
      throw ValidationError("LP inequality row length must equal num_vars");
    }
  }
  if (lp.eq_rows.size() != lp.eq_rhs.size() || lp.le_rows.size() != lp.le_rhs.size()) {
    throw ValidationError("LP rhs lengths must match row counts");
  }

  Tableau tab(lp);
  LpResult result;

  // Phase one: minimize the artificial mass.
  std::vector<double> phase1(tab.n_total(), 0.0);
  for (std::size_t j = tab.n_structural(); j < tab.n_total(); ++j) phase1[j] = 1.0;
  if (!tab.optimize(phase1, max_iterations, result.iterations, false)) {
    result.status = LpStatus::kInfeasible;  // phase one cannot be unbounded
    return result;
  }
  if (result.iterations >= max_iterations) {
    result.status = LpStatus::kIterationLimit;
    return result;
  }
  if (tab.objective_value(phase1) > kFeasTol) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  tab.eliminate_artificials();

  // Phase two: the real objective over structural variables.
  std::vector<double> cost(tab.n_total(), 0.0);
  for (int j = 0; j < lp.num_vars; ++j) cost[j] = lp.objective[j];
  if (!tab.optimize(cost, max_iterations, result.iterations, true)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  if (result.iterations >= max_iterations) {
    result.status = LpStatus::kIterationLimit;
    return result;
  }

  result.status = LpStatus::kOptimal;
  result.x = tab.solution(lp.num_vars);
  result.objective = tab.objective_value(cost);
  return result;
}

}  // namespace semiq
