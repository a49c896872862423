#include "dracula/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dracula/error.hpp"
#include "dracula/simplex.hpp"

namespace dracula {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool strictly_less(double a, double b) {
  if (!std::isfinite(b)) return a < b;
  return a < b - 1e-12 * std::max(1.0, std::abs(b));
}

void check_intervals(const ReconInstance& inst) {
  const std::size_t n = inst.length();
  for (const auto& iv : inst.intervals) {
    if (iv.length == 0 || iv.start < 1 || iv.end() > n) {
      throw Error(ErrorKind::InvalidParam, "interval outside the target");
    }
  }
}

}  // namespace

std::optional<ReconResult> try_solve_dp(const ReconInstance& inst) {
  check_intervals(inst);
  const std::size_t n = inst.length();
  ReconResult out;
  if (inst.demand <= 0.0 || n == 0) return out;

  std::vector<std::vector<std::size_t>> ending(n + 1);
  std::vector<bool> covered(n + 2, false);
  for (std::size_t k = 0; k < inst.intervals.size(); ++k) {
    const auto& iv = inst.intervals[k];
    if (iv.cost < 0.0) throw Error(ErrorKind::InvalidParam, "negative interval cost");
    ending[iv.end()].push_back(k);
    for (std::uint32_t p = iv.start; p <= iv.end(); ++p) covered[p] = true;
  }
  for (std::size_t p = 1; p <= n; ++p) {
    if (!covered[p]) return std::nullopt;
  }
  for (auto& list : ending) {
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      const auto& x = inst.intervals[a];
      const auto& y = inst.intervals[b];
      if (x.length != y.length) return x.length > y.length;
      return x.id < y.id;
    });
  }

  // best[e]: cheapest set covering 1..e whose rightmost interval ends at e.
  std::vector<double> best(n + 1, kInf);
  std::vector<std::size_t> choice(n + 1, 0);
  std::vector<std::size_t> prev(n + 1, 0);
  best[0] = 0.0;
  for (std::size_t e = 1; e <= n; ++e) {
    for (std::size_t k : ending[e]) {
      const auto& iv = inst.intervals[k];
      double base = kInf;
      std::size_t from = 0;
      // Upward, so ties keep the predecessor with the least overlap.
      for (std::size_t j = iv.start - 1; j < e; ++j) {
        if (strictly_less(best[j], base)) {
          base = best[j];
          from = j;
        }
      }
      if (!std::isfinite(base)) continue;
      const double cand = base + iv.cost;
      if (strictly_less(cand, best[e])) {
        best[e] = cand;
        choice[e] = k;
        prev[e] = from;
      }
    }
  }
  if (!std::isfinite(best[n])) return std::nullopt;

  out.cost = best[n];
  for (std::size_t e = n; e > 0; e = prev[e]) out.chosen.push_back(inst.intervals[choice[e]].id);
  std::reverse(out.chosen.begin(), out.chosen.end());
  return out;
}

ReconResult solve_dp(const ReconInstance& inst) {
  auto res = try_solve_dp(inst);
  if (!res) throw Error(ErrorKind::Infeasible, "some target position is covered by no pointer");
  return *std::move(res);
}

std::vector<std::vector<int>> FlowInstance::incidence() const {
  std::vector<std::vector<int>> m(nodes, std::vector<int>(arcs.size(), 0));
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    m[arcs[a].from][a] += 1;
    m[arcs[a].to][a] -= 1;
  }
  return m;
}

FlowInstance to_flow(const ReconInstance& inst) {
  check_intervals(inst);
  const std::size_t n = inst.length();
  FlowInstance flow;
  flow.nodes = n + 1;
  for (const auto& iv : inst.intervals) {
    flow.arcs.push_back({FlowArc::Kind::Pointer, iv.start - 1, iv.end(), iv.cost, iv.upper, iv.id});
  }
  for (std::uint32_t i = 1; i <= n; ++i) {
    flow.arcs.push_back({FlowArc::Kind::Slack, i, i - 1, 0.0, kInf, i});
  }
  flow.supply.assign(n + 1, 0.0);
  flow.supply[0] += inst.demand;
  flow.supply[n] -= inst.demand;
  return flow;
}

double solve_flow(const FlowInstance& flow) {
  if (flow.nodes <= 1) return 0.0;
  LinearProgram lp;
  for (const auto& arc : flow.arcs) lp.add_variable(arc.cost, arc.capacity);
  std::vector<std::vector<LinearProgram::Term>> rows(flow.nodes - 1);
  for (std::size_t a = 0; a < flow.arcs.size(); ++a) {
    const auto& arc = flow.arcs[a];
    const auto var = static_cast<std::uint32_t>(a);
    if (arc.from + 1 < flow.nodes) rows[arc.from].push_back({var, 1.0});
    if (arc.to + 1 < flow.nodes) rows[arc.to].push_back({var, -1.0});
  }
  // The last node's balance is implied by the others.
  for (std::size_t v = 0; v + 1 < flow.nodes; ++v) {
    lp.add_row(std::move(rows[v]), RowSense::Equal, flow.supply[v]);
  }
  const auto res = solve_lp(lp);
  return res.status == LpStatus::Optimal ? res.objective : kInf;
}

std::vector<std::vector<int>> cover_matrix(const ReconInstance& inst) {
  const std::size_t n = inst.length();
  std::vector<std::vector<int>> x(n, std::vector<int>(inst.intervals.size(), 0));
  for (std::size_t k = 0; k < inst.intervals.size(); ++k) {
    const auto& iv = inst.intervals[k];
    for (std::uint32_t p = iv.start; p <= iv.end(); ++p) x[p - 1][k] = 1;
  }
  return x;
}

FractionalResult solve_fractional(const ReconInstance& inst) {
  check_intervals(inst);
  const std::size_t n = inst.length();
  FractionalResult out;
  out.weights.assign(inst.intervals.size(), 0.0);
  if (inst.demand <= 0.0) return out;
  LinearProgram lp;
  for (const auto& iv : inst.intervals) {
    if (iv.upper < 0.0 || iv.upper > 1.0) throw Error(ErrorKind::InvalidParam, "weight bound outside [0,1]");
    lp.add_variable(iv.cost, iv.upper);
  }
  std::vector<std::vector<LinearProgram::Term>> rows(n);
  for (std::size_t k = 0; k < inst.intervals.size(); ++k) {
    const auto& iv = inst.intervals[k];
    for (std::uint32_t p = iv.start; p <= iv.end(); ++p) {
      rows[p - 1].push_back({static_cast<std::uint32_t>(k), 1.0});
    }
  }
  for (auto& r : rows) lp.add_row(std::move(r), RowSense::GreaterEqual, inst.demand);
  const auto res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) throw Error(ErrorKind::Infeasible, "fractional cover infeasible");
  out.cost = res.objective;
  out.weights = res.x;
  return out;
}

std::string describe(const ReconInstance& inst, const ReconResult& result) {
  std::ostringstream os;
  os << "target_length: " << inst.length() << '\n';
  os << "demand: " << inst.demand << '\n';
  os << "intervals: " << inst.intervals.size() << '\n';
  for (const auto& iv : inst.intervals) {
    os << "  id=" << iv.id << " start=" << iv.start << " length=" << iv.length << " cost=" << iv.cost
       << " upper=" << iv.upper << '\n';
  }
  os << "cost: " << result.cost << '\n';
  os << "chosen:";
  for (auto id : result.chosen) os << ' ' << id;
  os << '\n';
  return os.str();
}

}  // namespace dracula
