#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dracula/features.hpp"
#include "dracula/lp.hpp"

namespace dracula {

/// Which storage costs the model uses.
enum class CostKind {
  Scheme,     // (tau, lambda, alpha)
  Plaintext,  // d_s = |s|, character pointers free; the shallow landmark with cfl
  BagOfNgrams,
};

struct CompressJob {
  std::shared_ptr<const Corpus> corpus;
  std::size_t max_len = 8;
  std::size_t min_count = 2;
  CostScheme scheme{0.0, 1.0, 1.0};
  CostKind cost_kind = CostKind::Scheme;
  std::size_t bon_len = 0;  // bag-of-n-grams length when cost_kind == BagOfNgrams
  bool cuts = false;
  bool cfl = false;
  bool exact_if_small = false;
  std::size_t exact_limit = 12;
  /// Local search after rounding; the pool is every allowed string when there
  /// are at most polish_pool_limit of them, else the LP support.
  bool polish = true;
  std::size_t polish_pool_limit = 64;
  /// Outside cfl mode, also round the shallow relaxation and use its
  /// dictionary as a second starting point; the better result is kept.
  bool shallow_start = true;
};

/// Checks parameter ranges; throws InvalidParam.
void validate_job(const CompressJob& job);

enum class Route { Landmark, Exact, LpRound };
std::string_view route_name(Route route);

struct CompressReport {
  Route route = Route::LpRound;
  std::size_t num_candidates = 0;
  std::size_t num_pointers = 0;
  std::size_t lp_variables = 0;
  std::size_t lp_rows = 0;
  std::size_t lp_iterations = 0;
  bool lp_integral = false;
  std::optional<double> lp_objective;
  std::optional<double> threshold_objective;  // rounding before local search
  double rounded_objective = 0.0;
  std::optional<double> gap;  // rounded - lp
  CompressionStats stats;
  std::size_t doc_pointers = 0;
  std::size_t dict_pointers = 0;
};

struct CompressResult {
  Compression compression;
  CompressReport report;
};

/// The model instance a job describes (candidates, pointers, costs, cuts).
std::shared_ptr<const ModelInstance> build_model(const CompressJob& job);

/// Enumerate, build, solve and round. The result is always validated; an
/// invalid compression raises NumericalFailure.
CompressResult compress(const CompressJob& job);

/// Structured "key: value" rendering of a report.
std::string format_report(const CompressReport& report);

struct PathPoint {
  double lambda = 0.0;
  double lp_objective = 0.0;
  double rounded_objective = 0.0;
  double mnl = 0.0;
  std::size_t dict_size = 0;
  std::uint64_t fingerprint = 0;  // of the LP solution's (t, w)
};

struct PathSegment {
  double lo = 0.0;
  double hi = 0.0;  // last sampled lambda of the segment
  std::vector<double> lambdas;
  std::vector<double> objectives;
  std::uint64_t fingerprint = 0;
};

struct PathResult {
  std::vector<PathPoint> points;
  std::vector<PathSegment> segments;
};

/// One LP solve per grid point (warm-started from the previous basis), with
/// rounding at each point; consecutive equal fingerprints merge into segments.
/// The job's scheme supplies tau and alpha.
PathResult path_sweep(const CompressJob& job, const std::vector<double>& lambdas);

/// Largest violation of concavity over every triple of grid points.
double concavity_violation(const std::vector<double>& lambdas, const std::vector<double>& values);
/// True when no fingerprint reappears after a different one.
bool segments_contiguous(const std::vector<PathPoint>& points);

/// True iff every dictionary string of length <= k_check in the compression is
/// built from character pointers only.
bool uses_only_characters(const Compression& compression, std::size_t k_check);
/// Compresses with the given alpha and checks the rule above. Requires
/// alpha < 1 / k_check.
bool alpha_depth_check(const CompressJob& job, double alpha, std::size_t k_check);

}  // namespace dracula
