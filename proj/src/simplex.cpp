#include "dracula/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dracula/error.hpp"

namespace dracula {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDrop = 1e-12;

}  // namespace

std::uint32_t LinearProgram::add_variable(double c, double ub, std::string name) {
  cost.push_back(c);
  upper.push_back(ub);
  names.push_back(std::move(name));
  return static_cast<std::uint32_t>(cost.size() - 1);
}

void LinearProgram::add_row(std::vector<Term> terms, RowSense sense, double rhs, std::string name) {
  rows.push_back({std::move(terms), sense, rhs, std::move(name)});
}

std::string_view lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    worst = std::max(worst, -x[j]);
    if (std::isfinite(lp.upper[j])) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  for (const auto& r : lp.rows) {
    double a = 0.0;
    for (const auto& t : r.terms) a += t.coef * x[t.var];
    switch (r.sense) {
      case RowSense::LessEqual: worst = std::max(worst, a - r.rhs); break;
      case RowSense::GreaterEqual: worst = std::max(worst, r.rhs - a); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(a - r.rhs)); break;
    }
  }
  return worst;
}

SimplexSolver::SimplexSolver(const LinearProgram& lp, SimplexOptions options)
    : lp_(lp), opt_(options) {
  m_ = lp.num_rows();
  n_ = lp.num_vars();
  true_cost_ = lp.cost;
  reset();
}

void SimplexSolver::reset() {
  const auto& rows = lp_.rows;
  row_sign_.assign(m_, 1.0);
  rhs_.assign(m_, 0.0);

  // Column layout: structural, one logical per inequality row, then artificials.
  std::vector<std::ptrdiff_t> logical(m_, -1);
  std::vector<double> logical_coef(m_, 0.0);
  std::size_t next = n_;
  for (std::size_t i = 0; i < m_; ++i) {
    const auto& r = rows[i];
    row_sign_[i] = r.rhs < 0.0 ? -1.0 : 1.0;
    rhs_[i] = row_sign_[i] * r.rhs;
    if (r.sense != RowSense::Equal) {
      logical[i] = static_cast<std::ptrdiff_t>(next++);
      logical_coef[i] = (r.sense == RowSense::LessEqual ? 1.0 : -1.0) * row_sign_[i];
    }
  }
  std::vector<std::ptrdiff_t> art(m_, -1);
  for (std::size_t i = 0; i < m_; ++i) {
    if (logical[i] < 0 || logical_coef[i] < 0.0) art[i] = static_cast<std::ptrdiff_t>(next++);
  }
  cols_ = next;

  tableau_.assign(m_ * cols_, 0.0);
  col_upper_.assign(cols_, kInf);
  artificial_.assign(cols_, false);
  for (std::size_t j = 0; j < n_; ++j) col_upper_[j] = lp_.upper[j];
  initial_basis_.assign(m_, 0);
  basis_.assign(m_, 0);
  status_.assign(cols_, Status::AtLower);
  xb_.assign(m_, 0.0);

  for (std::size_t i = 0; i < m_; ++i) {
    double* t = row(i);
    for (const auto& term : rows[i].terms) t[term.var] += row_sign_[i] * term.coef;
    if (logical[i] >= 0) t[logical[i]] = logical_coef[i];
    std::size_t b = art[i] >= 0 ? static_cast<std::size_t>(art[i]) : static_cast<std::size_t>(logical[i]);
    if (art[i] >= 0) {
      t[b] = 1.0;
      artificial_[b] = true;
    }
    initial_basis_[i] = b;
    basis_[i] = b;
    status_[b] = Status::Basic;
    xb_[i] = rhs_[i];
  }
  for (std::size_t j = 0; j < n_; ++j) {
    if (col_upper_[j] <= 0.0) status_[j] = Status::AtLower;
  }
  reduced_.assign(cols_, 0.0);
  col_cost_.assign(cols_, 0.0);
  iterations_ = 0;
  optimal_basis_ = false;
}

void SimplexSolver::compute_reduced_costs() {
  reduced_ = col_cost_;
  for (std::size_t i = 0; i < m_; ++i) {
    const double cb = col_cost_[basis_[i]];
    if (cb == 0.0) continue;
    const double* t = row(i);
    for (std::size_t j = 0; j < cols_; ++j) {
      if (t[j] != 0.0) reduced_[j] -= cb * t[j];
    }
  }
  for (std::size_t i = 0; i < m_; ++i) reduced_[basis_[i]] = 0.0;
}

void SimplexSolver::recompute_basic_values() {
  // B^-1 sits in the columns of the initial (identity) basis.
  std::vector<double> residual = rhs_;
  for (std::size_t k = 0; k < m_; ++k) {
    for (const auto& term : lp_.rows[k].terms) {
      if (status_[term.var] == Status::AtUpper) {
        residual[k] -= row_sign_[k] * term.coef * col_upper_[term.var];
      }
    }
  }
  for (std::size_t i = 0; i < m_; ++i) {
    const double* t = row(i);
    double v = 0.0;
    for (std::size_t k = 0; k < m_; ++k) {
      const double binv = t[initial_basis_[k]];
      if (binv != 0.0 && residual[k] != 0.0) v += binv * residual[k];
    }
    xb_[i] = v;
  }
}

void SimplexSolver::pivot(std::size_t r, std::size_t q) {
  double* pr = row(r);
  const double p = pr[q];
  nz_.clear();
  for (std::size_t k = 0; k < cols_; ++k) {
    if (pr[k] == 0.0) continue;
    double v = pr[k] / p;
    if (std::abs(v) < kDrop) {
      pr[k] = 0.0;
      continue;
    }
    pr[k] = v;
    nz_.push_back(k);
  }
  pr[q] = 1.0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* t = row(i);
    const double f = t[q];
    if (f == 0.0) continue;
    for (std::size_t k : nz_) {
      double v = t[k] - f * pr[k];
      t[k] = std::abs(v) < kDrop ? 0.0 : v;
    }
    t[q] = 0.0;
  }
  const double f = reduced_[q];
  if (f != 0.0) {
    for (std::size_t k : nz_) reduced_[k] -= f * pr[k];
  }
  reduced_[q] = 0.0;
  status_[basis_[r]] = Status::AtLower;  // caller fixes the bound side
  basis_[r] = q;
  status_[q] = Status::Basic;
}

bool SimplexSolver::iterate(bool bland_only) {
  const std::size_t limit =
      opt_.max_iterations ? opt_.max_iterations : 200 * (m_ + cols_) + 10000;
  std::size_t degenerate = 0;
  while (true) {
    if (iterations_ > limit) {
      throw Error(ErrorKind::NumericalFailure, "simplex iteration limit exceeded");
    }
    const bool bland = bland_only || degenerate > opt_.degenerate_limit;

    // Pricing.
    std::size_t q = cols_;
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      const Status s = status_[j];
      if (s == Status::Basic || s == Status::Excluded) continue;
      const double d = reduced_[j];
      double gain = 0.0;
      if (s == Status::AtLower && d < -opt_.opt_tol && col_upper_[j] > 0.0) gain = -d;
      if (s == Status::AtUpper && d > opt_.opt_tol) gain = d;
      if (gain == 0.0) continue;
      if (bland) {
        q = j;
        break;
      }
      if (gain > best) {
        best = gain;
        q = j;
      }
    }
    if (q == cols_) return true;

    const double dir = status_[q] == Status::AtLower ? 1.0 : -1.0;

    // Ratio test. Bland mode keeps the textbook rule (smallest basic index
    // among the tied rows); otherwise a Harris two-pass test picks the largest
    // pivot among the rows that block within the feasibility tolerance.
    auto limit_of = [&](std::size_t i, double a, double slack_tol) {
      const double rate = -dir * a;
      if (rate < 0.0) return (std::max(0.0, xb_[i]) + slack_tol) / -rate;
      const double u = col_upper_[basis_[i]];
      if (!std::isfinite(u)) return kInf;
      return (std::max(0.0, u - xb_[i]) + slack_tol) / rate;
    };
    double theta = col_upper_[q];  // bound flip distance (may be inf)
    std::size_t leave = m_;
    if (bland) {
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = row(i)[q];
        if (std::abs(a) <= opt_.pivot_tol) continue;
        const double lim = limit_of(i, a, 0.0);
        if (lim < theta - kDrop || (lim <= theta + kDrop && leave != m_ && basis_[i] < basis_[leave])) {
          theta = std::min(theta, lim);
          leave = i;
        } else if (leave == m_ && lim < theta) {
          theta = lim;
          leave = i;
        }
      }
    } else {
      double relaxed = kInf;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = row(i)[q];
        if (std::abs(a) <= opt_.pivot_tol) continue;
        relaxed = std::min(relaxed, limit_of(i, a, opt_.feas_tol));
      }
      if (relaxed < theta) {
        double piv = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = row(i)[q];
          if (std::abs(a) <= opt_.pivot_tol) continue;
          if (limit_of(i, a, 0.0) <= relaxed && std::abs(a) > piv) {
            piv = std::abs(a);
            leave = i;
          }
        }
        theta = limit_of(leave, row(leave)[q], 0.0);
      }
    }
    if (!std::isfinite(theta)) return false;
    ++iterations_;

    degenerate = theta <= kDrop ? degenerate + 1 : 0;

    for (std::size_t i = 0; i < m_; ++i) {
      const double a = row(i)[q];
      if (a != 0.0) xb_[i] -= dir * a * theta;
    }
    if (leave == m_) {
      status_[q] = status_[q] == Status::AtLower ? Status::AtUpper : Status::AtLower;
      continue;
    }
    const double entering_value = dir > 0 ? theta : col_upper_[q] - theta;
    const std::size_t out = basis_[leave];
    const double rate = -dir * row(leave)[q];
    pivot(leave, q);
    status_[out] = rate < 0.0 ? Status::AtLower : Status::AtUpper;
    if (artificial_[out]) status_[out] = Status::Excluded;
    xb_[leave] = entering_value;
    if (iterations_ % 64 == 0) recompute_basic_values();
  }
}

void SimplexSolver::drive_out_artificials() {
  for (std::size_t j = n_; j < cols_; ++j) {
    if (!artificial_[j]) continue;
    col_upper_[j] = 0.0;
    if (status_[j] != Status::Basic) status_[j] = Status::Excluded;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    if (!artificial_[basis_[i]]) continue;
    const double* t = row(i);
    std::size_t q = cols_;
    double best = opt_.pivot_tol;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (status_[j] == Status::Basic || status_[j] == Status::Excluded) continue;
      if (std::abs(t[j]) > best) {
        best = std::abs(t[j]);
        q = j;
      }
    }
    if (q == cols_) continue;  // redundant row; the artificial stays fixed at zero
    const Status entering_side = status_[q];
    const double value = entering_side == Status::AtUpper ? col_upper_[q] : 0.0;
    const std::size_t out = basis_[i];
    pivot(i, q);
    status_[out] = Status::Excluded;
    xb_[i] = value;
  }
}

SimplexResult SimplexSolver::extract(LpStatus status) {
  SimplexResult res;
  res.status = status;
  res.iterations = iterations_;
  if (status != LpStatus::Optimal) return res;
  res.x.assign(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    if (status_[j] == Status::AtUpper) res.x[j] = col_upper_[j];
  }
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t b = basis_[i];
    if (b < n_) {
      res.x[b] = std::clamp(xb_[i], 0.0, col_upper_[b]);
      ++res.basic_structural;
    }
  }
  res.objective = 0.0;
  for (std::size_t j = 0; j < n_; ++j) res.objective += true_cost_[j] * res.x[j];
  res.max_violation = max_violation(lp_, res.x);
  return res;
}

SimplexResult SimplexSolver::solve() {
  for (int attempt = 0; attempt < 2; ++attempt) {
    reset();
    const bool bland_only = opt_.bland_only || attempt > 0;

    // Phase 1: minimize the sum of artificials.
    for (std::size_t j = 0; j < cols_; ++j) col_cost_[j] = artificial_[j] ? 1.0 : 0.0;
    compute_reduced_costs();
    iterate(bland_only);
    recompute_basic_values();
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (artificial_[basis_[i]]) infeasibility += std::max(0.0, xb_[i]);
    }
    if (infeasibility > opt_.feas_tol) {
      optimal_basis_ = false;
      return extract(LpStatus::Infeasible);
    }
    drive_out_artificials();

    // Phase 2.
    std::fill(col_cost_.begin(), col_cost_.end(), 0.0);
    std::copy(true_cost_.begin(), true_cost_.end(), col_cost_.begin());
    compute_reduced_costs();
    if (!iterate(bland_only)) return extract(LpStatus::Unbounded);
    recompute_basic_values();
    SimplexResult res = extract(LpStatus::Optimal);
    if (res.max_violation <= opt_.feas_tol) {
      optimal_basis_ = true;
      return res;
    }
  }
  throw Error(ErrorKind::NumericalFailure, "simplex solution violates constraints beyond tolerance");
}

SimplexResult SimplexSolver::reoptimize(std::span<const double> cost) {
  if (cost.size() != n_) throw Error(ErrorKind::DimensionMismatch, "cost vector size");
  true_cost_.assign(cost.begin(), cost.end());
  if (!optimal_basis_) return solve();
  std::fill(col_cost_.begin(), col_cost_.end(), 0.0);
  std::copy(true_cost_.begin(), true_cost_.end(), col_cost_.begin());
  compute_reduced_costs();
  if (!iterate(opt_.bland_only)) {
    optimal_basis_ = false;
    return extract(LpStatus::Unbounded);
  }
  recompute_basic_values();
  SimplexResult res = extract(LpStatus::Optimal);
  if (res.max_violation <= opt_.feas_tol) return res;
  return solve();
}

SimplexResult solve_lp(const LinearProgram& lp, SimplexOptions options) {
  SimplexSolver solver(lp, options);
  return solver.solve();
}

std::string to_lp_format(const LinearProgram& lp) {
  auto name = [&](std::size_t j) {
    return j < lp.names.size() && !lp.names[j].empty() ? lp.names[j] : "x" + std::to_string(j);
  };
  auto term = [](std::ostringstream& os, double c, const std::string& v, bool first) {
    if (c < 0) {
      os << " - " << -c << ' ' << v;
    } else {
      os << (first ? " " : " + ") << c << ' ' << v;
    }
  };
  std::ostringstream os;
  os.precision(17);
  os << "Minimize\n obj:";
  bool first = true;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (lp.cost[j] == 0.0) continue;
    term(os, lp.cost[j], name(j), first);
    first = false;
  }
  if (first) os << " 0 " << name(0);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.rows[i];
    os << ' ' << (r.name.empty() ? "r" + std::to_string(i) : r.name) << ':';
    bool f = true;
    for (const auto& t : r.terms) {
      term(os, t.coef, name(t.var), f);
      f = false;
    }
    if (f) os << " 0 " << name(0);
    os << (r.sense == RowSense::LessEqual ? " <= " : r.sense == RowSense::GreaterEqual ? " >= " : " = ")
       << r.rhs << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (std::isfinite(lp.upper[j])) {
      os << " 0 <= " << name(j) << " <= " << lp.upper[j] << '\n';
    } else {
      os << ' ' << name(j) << " >= 0\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace dracula
