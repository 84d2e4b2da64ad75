#include "p2pmarket/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace p2pm {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasTol = 1e-8;

struct Row {
  std::vector<double> coeffs;  // over the shifted structural variables
  double rhs = 0.0;
  RowKind kind = RowKind::LessEqual;
};

void validate(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.constraint_matrix.size();
  if (n == 0) throw ValidationError("lp: objective is empty");
  if (lp.rhs.size() != m || lp.row_kinds.size() != m)
    throw ValidationError("lp: constraint_matrix, rhs and row_kinds sizes disagree");
  if (!lp.lower_bounds.empty() && lp.lower_bounds.size() != n)
    throw ValidationError("lp: lower_bounds size disagrees with objective");
  if (!lp.upper_bounds.empty() && lp.upper_bounds.size() != n)
    throw ValidationError("lp: upper_bounds size disagrees with objective");
  for (double c : lp.objective)
    if (!std::isfinite(c)) throw ValidationError("lp: non-finite objective coefficient");
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.constraint_matrix[i].size() != n)
      throw ValidationError("lp: row " + std::to_string(i) + " has wrong width");
    for (double a : lp.constraint_matrix[i])
      if (!std::isfinite(a)) throw ValidationError("lp: non-finite constraint coefficient");
    if (!std::isfinite(lp.rhs[i]))
      throw ValidationError("lp: non-finite rhs in row " + std::to_string(i));
  }
  for (std::size_t j = 0; j < lp.lower_bounds.size(); ++j) {
    const double l = lp.lower_bounds[j];
    if (!std::isfinite(l) || l < 0.0)
      throw ValidationError("lp: lower bound of variable " + std::to_string(j) +
                            " must be finite and >= 0");
  }
  for (std::size_t j = 0; j < lp.upper_bounds.size(); ++j) {
    const double u = lp.upper_bounds[j];
    const double l = lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j];
    if (std::isnan(u) || u < l)
      throw ValidationError("lp: upper bound of variable " + std::to_string(j) +
                            " is below its lower bound");
  }
}

// Checks an extracted solution against the original program.
void audit_solution(const LinearProgram& lp, const std::vector<double>& x) {
  const std::size_t n = lp.objective.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double l = lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j];
    const double u = lp.upper_bounds.empty() ? LinearProgram::kInfinity : lp.upper_bounds[j];
    if (x[j] < l - kFeasTol || x[j] > u + kFeasTol)
      throw InternalError("lp: solution violates bounds of variable " + std::to_string(j));
  }
  for (std::size_t i = 0; i < lp.constraint_matrix.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) lhs += lp.constraint_matrix[i][j] * x[j];
    const double b = lp.rhs[i];
    const bool ok = lp.row_kinds[i] == RowKind::LessEqual      ? lhs <= b + kFeasTol
                    : lp.row_kinds[i] == RowKind::GreaterEqual ? lhs >= b - kFeasTol
                                                               : std::fabs(lhs - b) <= kFeasTol;
    if (!ok) throw InternalError("lp: solution violates constraint row " + std::to_string(i));
  }
}

class Tableau {
 public:
  Tableau(const std::vector<Row>& rows, std::size_t n_struct)
      : m_(rows.size()), n_struct_(n_struct) {
    // Column layout: structural | slack/surplus | artificial | rhs.
    n_slack_ = 0;
    for (const Row& r : rows)
      if (r.kind != RowKind::Equal) ++n_slack_;
    n_art_ = 0;
    for (const Row& r : rows)
      if (r.kind != RowKind::LessEqual) ++n_art_;

    cols_ = n_struct_ + n_slack_ + n_art_;
    grid_.assign(m_, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m_, 0);

    std::size_t slack = n_struct_;
    std::size_t art = n_struct_ + n_slack_;
    for (std::size_t i = 0; i < m_; ++i) {
      const Row& r = rows[i];
      for (std::size_t j = 0; j < n_struct_; ++j) grid_[i][j] = r.coeffs[j];
      grid_[i][cols_] = r.rhs;
      switch (r.kind) {
        case RowKind::LessEqual:
          grid_[i][slack] = 1.0;
          basis_[i] = slack++;
          break;
        case RowKind::GreaterEqual:
          grid_[i][slack++] = -1.0;
          grid_[i][art] = 1.0;
          basis_[i] = art++;
          break;
        case RowKind::Equal:
          grid_[i][art] = 1.0;
          basis_[i] = art++;
          break;
      }
    }
    first_art_ = n_struct_ + n_slack_;
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return cols_; }
  std::size_t first_artificial() const { return first_art_; }
  bool is_artificial(std::size_t col) const { return col >= first_art_; }

  // Minimizes obj over the current feasible basis. allowed_cols limits
  // which columns may enter (phase 2 bans artificials). Returns Optimal,
  // Unbounded or Stalled.
  LpStatus run(const std::vector<double>& obj, std::size_t max_entering_col, long& budget) {
    // Reduced-cost row: z_j = obj_j - sum over basic rows.
    std::vector<double> red(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) red[j] = j < obj.size() ? obj[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = basis_[i] < obj.size() ? obj[basis_[i]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) red[j] -= cb * grid_[i][j];
    }

    while (true) {
      if (--budget < 0) return LpStatus::Stalled;

      // Bland: entering = lowest-index column with negative reduced cost.
      std::size_t enter = max_entering_col;
      for (std::size_t j = 0; j < max_entering_col; ++j) {
        if (red[j] < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter == max_entering_col) return LpStatus::Optimal;

      // Ratio test; ties broken by lowest basis label (Bland).
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = grid_[i][enter];
        if (a <= kPivotEps) continue;
        const double ratio = grid_[i][cols_] / a;
        if (leave == m_ || ratio < best - kPivotEps ||
            (ratio < best + kPivotEps && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return LpStatus::Unbounded;

      pivot(leave, enter, red);
    }
  }

  void pivot(std::size_t r, std::size_t c, std::vector<double>& red) {
    const double inv = 1.0 / grid_[r][c];
    for (double& v : grid_[r]) v *= inv;
    grid_[r][c] = 1.0;  // squash roundoff on the pivot itself
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = grid_[i][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) grid_[i][j] -= f * grid_[r][j];
      grid_[i][c] = 0.0;
    }
    const double f = red[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) red[j] -= f * grid_[r][j];
      red[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Pivots basic artificials out after phase 1; deletes genuinely
  // redundant rows.
  void eliminate_artificials() {
    for (std::size_t i = 0; i < m_;) {
      if (!is_artificial(basis_[i])) {
        ++i;
        continue;
      }
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (std::fabs(grid_[i][j]) > kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) {
        grid_.erase(grid_.begin() + long(i));
        basis_.erase(basis_.begin() + long(i));
        --m_;
        continue;
      }
      std::vector<double> dummy(cols_ + 1, 0.0);
      pivot(i, enter, dummy);
      ++i;
    }
  }

  std::vector<double> extract(std::size_t n_struct) const {
    std::vector<double> x(n_struct, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_struct) x[basis_[i]] = grid_[i][cols_];
    return x;
  }

  double rhs_of_row(std::size_t i) const { return grid_[i][cols_]; }

 private:
  std::size_t m_;
  std::size_t n_struct_;
  std::size_t n_slack_ = 0;
  std::size_t n_art_ = 0;
  std::size_t cols_ = 0;
  std::size_t first_art_ = 0;
  std::vector<std::vector<double>> grid_;
  std::vector<std::size_t> basis_;
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Stalled: return "stalled";
  }
  return "?";
}

LpSolution solve(const LinearProgram& lp) {
  validate(lp);

  const std::size_t n = lp.objective.size();
  const auto lower = [&](std::size_t j) {
    return lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j];
  };
  const auto upper = [&](std::size_t j) {
    return lp.upper_bounds.empty() ? LinearProgram::kInfinity : lp.upper_bounds[j];
  };

  // Shift to y = x - l >= 0 and append finite upper bounds as rows.
  std::vector<Row> rows;
  rows.reserve(lp.constraint_matrix.size() + n);
  for (std::size_t i = 0; i < lp.constraint_matrix.size(); ++i) {
    Row r;
    r.coeffs = lp.constraint_matrix[i];
    r.kind = lp.row_kinds[i];
    r.rhs = lp.rhs[i];
    for (std::size_t j = 0; j < n; ++j) r.rhs -= r.coeffs[j] * lower(j);
    rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isinf(upper(j))) continue;
    Row r;
    r.coeffs.assign(n, 0.0);
    r.coeffs[j] = 1.0;
    r.kind = RowKind::LessEqual;
    r.rhs = upper(j) - lower(j);
    rows.push_back(std::move(r));
  }
  // Nonnegative rhs so slacks / artificials form a feasible start basis.
  for (Row& r : rows) {
    if (r.rhs >= 0.0) continue;
    for (double& a : r.coeffs) a = -a;
    r.rhs = -r.rhs;
    r.kind = r.kind == RowKind::LessEqual    ? RowKind::GreaterEqual
             : r.kind == RowKind::GreaterEqual ? RowKind::LessEqual
                                               : RowKind::Equal;
  }

  Tableau tab(rows, n);
  long budget = 50L * long(tab.rows() + tab.cols());

  // Phase 1: minimize the artificial total.
  if (tab.first_artificial() < tab.cols()) {
    std::vector<double> phase1(tab.cols(), 0.0);
    for (std::size_t j = tab.first_artificial(); j < tab.cols(); ++j) phase1[j] = 1.0;
    const LpStatus st = tab.run(phase1, tab.cols(), budget);
    if (st == LpStatus::Stalled) return {LpStatus::Stalled, {}, 0.0};
    if (st == LpStatus::Unbounded)
      throw InternalError("lp: phase-1 objective is bounded below by construction");
    const auto full = tab.extract(tab.cols());
    double art_total = 0.0;
    for (std::size_t j = tab.first_artificial(); j < tab.cols(); ++j) art_total += full[j];
    if (art_total > 1e-7) return {LpStatus::Infeasible, {}, 0.0};
    tab.eliminate_artificials();
  }

  // Phase 2: the real objective (internally minimized) over the shifted
  // variables; artificial columns may not re-enter.
  std::vector<double> phase2(tab.cols(), 0.0);
  for (std::size_t j = 0; j < n; ++j)
    phase2[j] = lp.sense == LpSense::Maximize ? -lp.objective[j] : lp.objective[j];
  const LpStatus st = tab.run(phase2, tab.first_artificial(), budget);
  if (st == LpStatus::Stalled) return {LpStatus::Stalled, {}, 0.0};
  if (st == LpStatus::Unbounded) return {LpStatus::Unbounded, {}, 0.0};

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.primal_values = tab.extract(n);
  for (std::size_t j = 0; j < n; ++j) sol.primal_values[j] += lower(j);
  sol.objective_value = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    sol.objective_value += lp.objective[j] * sol.primal_values[j];
  audit_solution(lp, sol.primal_values);
  return sol;
}

}  // namespace p2pm
