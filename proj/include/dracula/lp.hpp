#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dracula/model.hpp"
#include "dracula/simplex.hpp"

namespace dracula {

/// Tolerances shared by the solver and the rounding step.
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kRoundThreshold = 1e-6;

/// Where each variable and row family lives inside the relaxation.
struct LpLayout {
  std::vector<CandidateId> t_candidate;     // t variable -> candidate
  std::vector<std::int64_t> t_var;          // candidate -> t variable, -1 when excluded
  std::size_t w_offset = 0;                 // w variable of pointer p is w_offset + p
  std::size_t num_doc_w = 0;
  std::size_t num_dict_w = 0;
  std::size_t doc_coverage_rows = 0;
  std::size_t dict_coverage_rows = 0;
  std::size_t linking_rows = 0;
  std::size_t cut_rows = 0;

  std::size_t num_t() const noexcept { return t_candidate.size(); }
  std::size_t w_var(PointerId p) const noexcept { return w_offset + p; }
};

/// Relaxation of the deep-compression binary program: variables t (one per
/// allowed string) then w (document pointers, then dictionary pointers), all in
/// [0, 1]. Rows: document coverage, dictionary coverage (X w - t_s >= 0),
/// linking (w_p - t_source <= 0) and optional class cuts.
struct LpInstance {
  std::shared_ptr<const ModelInstance> model;
  LinearProgram program;
  LpLayout layout;
};

LpInstance build_lp(std::shared_ptr<const ModelInstance> model, bool cuts);

/// Appends one row sum_{s in class} t_s <= 1 per class with >= 2 allowed members.
void add_equivalence_cuts(LpInstance& lp, const std::vector<std::vector<CandidateId>>& classes);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::size_t basic_structural = 0;
  double max_violation = 0.0;

  bool integral(double tol = kRoundThreshold) const;
};

/// Throws Infeasible when the relaxation has no solution.
LpSolution solve_simplex(const LpInstance& lp, SimplexOptions options = {});

double t_value(const LpInstance& lp, const LpSolution& sol, CandidateId s);
double w_value(const LpInstance& lp, const LpSolution& sol, PointerId p);

/// Dictionary plus document and dictionary pointer sets.
struct Compression {
  std::shared_ptr<const ModelInstance> model;
  std::vector<CandidateId> dictionary;   // sorted
  std::vector<PointerId> doc_pointers;   // sorted
  std::vector<PointerId> dict_pointers;  // sorted
  double objective = 0.0;
};

double evaluate_objective(const ModelInstance& model, const std::vector<CandidateId>& dictionary,
                          const std::vector<PointerId>& doc_pointers,
                          const std::vector<PointerId>& dict_pointers);

struct ValidityReport {
  std::vector<std::string> problems;
  bool ok() const noexcept { return problems.empty(); }
};

/// Coverage of every document and dictionary string, dictionary membership of
/// every used string, proper-substring sources, text agreement at every
/// pointer, acyclicity and the stored objective.
ValidityReport validate(const Compression& compression);

/// Hash of (S, P, P-hat).
std::uint64_t fingerprint(const Compression& compression);
/// Hash of the support of an LP solution with weights quantized to 1e-6.
std::uint64_t fingerprint(const LpInstance& lp, const LpSolution& sol);

/// Threshold t, reconstruct every document and dictionary string by DP over
/// the surviving strings, then drop strings not reachable from the documents
/// until the dictionary is stable. Integral solutions are read off directly.
Compression round_solution(const LpInstance& lp, const LpSolution& sol,
                           double threshold = kRoundThreshold);

/// Reconstruct everything optimally for a fixed dictionary. Throws Infeasible
/// when a document cannot be covered.
Compression reconstruct(std::shared_ptr<const ModelInstance> model, std::vector<CandidateId> dictionary);

/// The strings with t above the threshold, before any pruning.
std::vector<CandidateId> lp_support(const LpInstance& lp, const LpSolution& sol,
                                    double threshold = kRoundThreshold);

/// Best-improvement local search over dictionaries drawn from `pool`: each
/// step tries dropping one string of the working dictionary or adding one
/// string of the pool (and, when neither helps, swapping one for the other),
/// re-solving every reconstruction, and keeps the best strict improvement.
/// Stops at a local optimum or after `max_steps` moves.
Compression polish(const Compression& start, const std::vector<CandidateId>& pool,
                   std::size_t max_steps = 200);

/// Brute force over every dictionary subset (respecting the model's cuts).
/// Ties go to the smaller, then lexicographically smaller dictionary.
Compression exact_solve(std::shared_ptr<const ModelInstance> model, std::size_t limit = 12);

/// Every finite-cost pointer of a negative-cost landmark model.
Compression take_everything(std::shared_ptr<const ModelInstance> model);

}  // namespace dracula
