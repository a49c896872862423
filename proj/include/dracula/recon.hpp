#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dracula/corpus.hpp"

namespace dracula {

/// One allowed pointer inside a reconstruction module: covers positions
/// [start, start + length - 1] of the target.
struct Interval {
  std::uint32_t start = 1;  // 1-based
  std::uint32_t length = 1;
  double cost = 0.0;
  double upper = 1.0;  // weight bound, used by the fractional form only
  std::size_t id = 0;  // caller's pointer id

  std::uint32_t end() const noexcept { return start + length - 1; }
};

/// Minimum-cost covering of a single target string by intervals.
struct ReconInstance {
  Text target;
  std::size_t target_length = 0;  // == target.size() when a target text is given
  std::vector<Interval> intervals;
  double demand = 1.0;

  std::size_t length() const noexcept { return target.empty() ? target_length : target.size(); }
};

struct ReconResult {
  double cost = 0.0;
  std::vector<std::size_t> chosen;  // interval ids, ordered by start
};

/// Exact binary cover by dynamic programming over the rightmost covered
/// position. Ties prefer the longer interval, then the lower id. Requires
/// nonnegative costs. Throws Infeasible when a position has no interval.
ReconResult solve_dp(const ReconInstance& instance);
/// Same as solve_dp, returning nullopt instead of throwing Infeasible.
std::optional<ReconResult> try_solve_dp(const ReconInstance& instance);

/// Nodes 0..n are the gaps between target positions; node 0 receives the
/// demand and node n absorbs it.
struct FlowArc {
  enum class Kind : std::uint8_t { Pointer, Slack };
  Kind kind = Kind::Pointer;
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double cost = 0.0;
  double capacity = 0.0;  // +inf for slack arcs
  std::size_t id = 0;     // interval id for pointer arcs, position for slack arcs
};

struct FlowInstance {
  std::size_t nodes = 0;
  std::vector<FlowArc> arcs;
  std::vector<double> supply;  // +demand at node 0, -demand at the last node

  /// Node-arc incidence (+1 at the tail, -1 at the head); rows 0..n-1 form
  /// [Z | -Q], the last row completes every column to one +1 and one -1.
  std::vector<std::vector<int>> incidence() const;
};

FlowInstance to_flow(const ReconInstance& instance);

/// Solves the flow network as an LP over its incidence matrix. Returns +inf
/// when no feasible flow exists.
double solve_flow(const FlowInstance& flow);

struct FractionalResult {
  double cost = 0.0;
  std::vector<double> weights;  // aligned with instance.intervals
};

/// Continuous relaxation: min b'w s.t. Xw >= demand, 0 <= w <= upper.
/// Throws Infeasible.
FractionalResult solve_fractional(const ReconInstance& instance);

/// Interval-cover matrix X (rows = positions, columns = intervals).
std::vector<std::vector<int>> cover_matrix(const ReconInstance& instance);

/// Human-readable dump used by the debug CLI command.
std::string describe(const ReconInstance& instance, const ReconResult& result);

}  // namespace dracula
