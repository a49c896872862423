#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dracula {

enum class RowSense { LessEqual, GreaterEqual, Equal };

/// min c'x subject to row constraints and 0 <= x <= upper (upper may be +inf).
struct LinearProgram {
  struct Term {
    std::uint32_t var;
    double coef;
  };
  struct Row {
    std::vector<Term> terms;
    RowSense sense = RowSense::GreaterEqual;
    double rhs = 0.0;
    std::string name;
  };

  std::vector<double> cost;
  std::vector<double> upper;
  std::vector<std::string> names;
  std::vector<Row> rows;

  std::size_t num_vars() const noexcept { return cost.size(); }
  std::size_t num_rows() const noexcept { return rows.size(); }

  std::uint32_t add_variable(double c, double ub, std::string name = {});
  void add_row(std::vector<Term> terms, RowSense sense, double rhs, std::string name = {});
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view lp_status_name(LpStatus status);

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-7;
  double opt_tol = 1e-9;
  /// Consecutive degenerate pivots tolerated under Dantzig pricing before
  /// falling back to Bland's rule.
  std::size_t degenerate_limit = 50;
  bool bland_only = false;
  std::size_t max_iterations = 0;  // 0: derived from the problem size
};

struct SimplexResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::size_t basic_structural = 0;
  double max_violation = 0.0;
};

/// Largest violation of any row or bound by x.
double max_violation(const LinearProgram& lp, std::span<const double> x);

/// Bounded-variable primal simplex on a dense tableau. Two phases with
/// artificial variables; Dantzig pricing with a fallback to Bland's rule on
/// degenerate stalls. The solver keeps its final basis so a cost change can be
/// re-optimized from it.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp, SimplexOptions options = {});

  SimplexResult solve();
  /// Phase-2 re-solve from the last optimal basis with new structural costs.
  SimplexResult reoptimize(std::span<const double> cost);

 private:
  enum class Status : std::uint8_t { Basic, AtLower, AtUpper, Excluded };

  double* row(std::size_t i) { return tableau_.data() + i * cols_; }
  void reset();
  void compute_reduced_costs();
  void recompute_basic_values();
  void pivot(std::size_t r, std::size_t q);
  /// Returns false when unbounded.
  bool iterate(bool bland_only);
  void drive_out_artificials();
  SimplexResult extract(LpStatus status);

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;     // structural columns
  std::size_t cols_ = 0;  // structural + logical + artificial
  std::vector<double> tableau_;
  std::vector<double> rhs_;          // normalized right-hand side
  std::vector<double> col_upper_;
  std::vector<double> col_cost_;
  std::vector<double> true_cost_;
  std::vector<bool> artificial_;
  std::vector<std::size_t> initial_basis_;
  std::vector<double> row_sign_;
  std::vector<std::size_t> basis_;
  std::vector<Status> status_;
  std::vector<double> xb_;
  std::vector<double> reduced_;
  std::vector<std::size_t> nz_;
  std::size_t iterations_ = 0;
  bool optimal_basis_ = false;
};

SimplexResult solve_lp(const LinearProgram& lp, SimplexOptions options = {});

/// CPLEX-LP text for cross-checking with external solvers.
std::string to_lp_format(const LinearProgram& lp);

}  // namespace dracula
