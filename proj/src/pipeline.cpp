#include "dracula/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dracula/error.hpp"

namespace dracula {

namespace {

struct ModelParts {
  std::shared_ptr<const CandidateSet> candidates;
  PointerUniverse universe;
};

ModelParts model_parts(const CompressJob& job) {
  ModelParts parts;
  parts.candidates =
      std::make_shared<const CandidateSet>(enumerate_candidates(*job.corpus, job.max_len, job.min_count));
  parts.universe = build_pointers(*job.corpus, *parts.candidates, job.cfl);
  return parts;
}

ModelParts shallow_parts(const CompressJob& job, const ModelParts& deep) {
  return {deep.candidates, build_pointers(*job.corpus, *deep.candidates, true)};
}

std::shared_ptr<ModelInstance> make_model(const CompressJob& job, const ModelParts& parts,
                                          const CostScheme& scheme) {
  CostModel costs;
  switch (job.cost_kind) {
    case CostKind::Scheme: costs = scheme_costs(parts.universe, *parts.candidates, scheme); break;
    case CostKind::Plaintext: costs = plaintext_costs(parts.universe, *parts.candidates); break;
    case CostKind::BagOfNgrams:
      costs = bon_landmark_costs(parts.universe, *parts.candidates, job.bon_len);
      break;
  }
  auto model = std::make_shared<ModelInstance>(job.corpus, parts.candidates, parts.universe, costs);
  if (job.cuts) model->set_cuts(equivalence_classes(*parts.candidates));
  return model;
}

// Rounds an LP solution and, if asked, improves it by local search.
Compression finish(const CompressJob& job, const LpInstance& lp, const LpSolution& sol,
                   double* threshold_objective) {
  Compression c = round_solution(lp, sol);
  if (threshold_objective) *threshold_objective = c.objective;
  if (!job.polish) return c;
  const auto& strings = lp.model->strings();
  const auto pool = strings.size() <= job.polish_pool_limit ? strings : lp_support(lp, sol);
  return polish(c, pool);
}

void check_valid(const Compression& c) {
  const auto rep = validate(c);
  if (!rep.ok()) {
    throw Error(ErrorKind::NumericalFailure, "produced an invalid compression: " + rep.problems.front());
  }
}

}  // namespace

void validate_job(const CompressJob& job) {
  if (!job.corpus || job.corpus->size() == 0) throw Error(ErrorKind::EmptyCorpus, "no documents");
  if (job.max_len < 1) throw Error(ErrorKind::InvalidParam, "max length must be >= 1");
  if (job.min_count < 1) throw Error(ErrorKind::InvalidParam, "min count must be >= 1");
  if (job.cost_kind == CostKind::BagOfNgrams && job.bon_len < 1) {
    throw Error(ErrorKind::InvalidParam, "bag-of-n-grams length must be >= 1");
  }
  if (job.cost_kind == CostKind::Scheme) {
    const auto& s = job.scheme;
    if (!(s.tau >= 0.0) || !(s.lambda >= 0.0) || !(s.alpha >= 0.0 && s.alpha <= 1.0) ||
        !std::isfinite(s.tau) || !std::isfinite(s.lambda)) {
      throw Error(ErrorKind::InvalidParam, "need tau >= 0, lambda >= 0 and alpha in [0, 1]");
    }
  }
}

std::string_view route_name(Route route) {
  switch (route) {
    case Route::Landmark: return "landmark";
    case Route::Exact: return "exact";
    case Route::LpRound: return "lp-round";
  }
  return "unknown";
}

std::shared_ptr<const ModelInstance> build_model(const CompressJob& job) {
  validate_job(job);
  return make_model(job, model_parts(job), job.scheme);
}

CompressResult compress(const CompressJob& job) {
  validate_job(job);
  const auto parts = model_parts(job);
  const auto model = make_model(job, parts, job.scheme);

  CompressResult out;
  auto& rep = out.report;
  rep.num_candidates = parts.candidates->size();
  rep.num_pointers = model->num_pointers();

  if (model->negative_costs()) {
    rep.route = Route::Landmark;
    out.compression = take_everything(model);
  } else if (job.exact_if_small && model->strings().size() <= job.exact_limit) {
    rep.route = Route::Exact;
    out.compression = exact_solve(model, job.exact_limit);
  } else {
    rep.route = Route::LpRound;
    const LpInstance lp = build_lp(model, job.cuts);
    rep.lp_variables = lp.program.num_vars();
    rep.lp_rows = lp.program.num_rows();
    const LpSolution sol = solve_simplex(lp);
    rep.lp_iterations = sol.iterations;
    rep.lp_integral = sol.integral();
    rep.lp_objective = sol.objective;
    double threshold = 0.0;
    out.compression = finish(job, lp, sol, &threshold);
    rep.threshold_objective = threshold;
    if (job.shallow_start && !job.cfl) {
      // Every shallow solution is feasible here, so its dictionary is a
      // second place to start from.
      const auto flat_model = make_model(job, shallow_parts(job, parts), job.scheme);
      const LpInstance flat_lp = build_lp(flat_model, job.cuts);
      const Compression flat = finish(job, flat_lp, solve_simplex(flat_lp), nullptr);
      Compression alt = reconstruct(model, flat.dictionary);
      if (job.polish) {
        const auto& strings = model->strings();
        alt = polish(alt, strings.size() <= job.polish_pool_limit ? strings : flat.dictionary);
      }
      if (alt.objective < out.compression.objective - 1e-9) out.compression = std::move(alt);
    }
  }
  check_valid(out.compression);

  rep.rounded_objective = out.compression.objective;
  if (rep.lp_objective) rep.gap = rep.rounded_objective - *rep.lp_objective;
  rep.stats = stats(out.compression);
  rep.doc_pointers = out.compression.doc_pointers.size();
  rep.dict_pointers = out.compression.dict_pointers.size();
  return out;
}

std::string format_report(const CompressReport& r) {
  std::ostringstream os;
  os.precision(12);
  auto opt = [&](const char* key, const std::optional<double>& v) {
    os << key << ": ";
    if (v) os << *v; else os << "n/a";
    os << '\n';
  };
  os << "route: " << route_name(r.route) << '\n';
  os << "candidates: " << r.num_candidates << '\n';
  os << "pointers_in_model: " << r.num_pointers << '\n';
  os << "lp_variables: " << r.lp_variables << '\n';
  os << "lp_rows: " << r.lp_rows << '\n';
  os << "lp_iterations: " << r.lp_iterations << '\n';
  os << "lp_integral: " << (r.lp_integral ? "true" : "false") << '\n';
  opt("lp_objective", r.lp_objective);
  opt("threshold_objective", r.threshold_objective);
  os << "rounded_objective: " << r.rounded_objective << '\n';
  opt("gap", r.gap);
  os << "doc_pointers: " << r.doc_pointers << '\n';
  os << "dict_pointers: " << r.dict_pointers << '\n';
  os << "pointer_count: " << r.stats.pointer_count << '\n';
  os << "mnl: " << r.stats.mnl << '\n';
  os << "dict_size: " << r.stats.dict_size << '\n';
  os << "depth: " << r.stats.depth << '\n';
  return os.str();
}

PathResult path_sweep(const CompressJob& job, const std::vector<double>& lambdas) {
  validate_job(job);
  if (job.cost_kind != CostKind::Scheme) {
    throw Error(ErrorKind::InvalidParam, "a lambda sweep needs the parametric cost scheme");
  }
  if (lambdas.empty()) throw Error(ErrorKind::InvalidParam, "empty lambda grid");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] >= 0.0) || (i > 0 && !(lambdas[i] > lambdas[i - 1]))) {
      throw Error(ErrorKind::InvalidParam, "lambda grid must be nonnegative and strictly ascending");
    }
  }
  const auto parts = model_parts(job);

  PathResult out;
  std::optional<LpInstance> base;
  std::optional<SimplexSolver> solver;
  for (double lambda : lambdas) {
    CostScheme scheme = job.scheme;
    scheme.lambda = lambda;
    const auto model = make_model(job, parts, scheme);
    LpInstance lp = build_lp(model, job.cuts);
    SimplexResult res;
    if (!solver) {
      base = lp;
      solver.emplace(base->program);
      res = solver->solve();
    } else {
      res = solver->reoptimize(lp.program.cost);
    }
    if (res.status != LpStatus::Optimal) {
      throw Error(ErrorKind::Infeasible, "relaxation at lambda " + std::to_string(lambda) + " has no optimum");
    }
    LpSolution sol;
    sol.status = res.status;
    sol.values = res.x;
    sol.objective = res.objective;
    sol.iterations = res.iterations;
    sol.basic_structural = res.basic_structural;
    sol.max_violation = res.max_violation;

    const Compression c = finish(job, lp, sol, nullptr);
    check_valid(c);
    const auto st = stats(c);
    out.points.push_back({lambda, sol.objective, c.objective, st.mnl, st.dict_size, fingerprint(lp, sol)});
  }

  for (const auto& p : out.points) {
    if (out.segments.empty() || out.segments.back().fingerprint != p.fingerprint) {
      out.segments.push_back({p.lambda, p.lambda, {}, {}, p.fingerprint});
    }
    auto& seg = out.segments.back();
    seg.hi = p.lambda;
    seg.lambdas.push_back(p.lambda);
    seg.objectives.push_back(p.lp_objective);
  }
  return out;
}

double concavity_violation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "grid and values differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      for (std::size_t k = j + 1; k < x.size(); ++k) {
        const double w = (x[j] - x[i]) / (x[k] - x[i]);
        const double chord = (1.0 - w) * y[i] + w * y[k];
        worst = std::max(worst, chord - y[j]);
      }
    }
  }
  return worst;
}

bool segments_contiguous(const std::vector<PathPoint>& points) {
  std::vector<std::uint64_t> closed;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && points[i].fingerprint != points[i - 1].fingerprint) {
      closed.push_back(points[i - 1].fingerprint);
      if (std::find(closed.begin(), closed.end(), points[i].fingerprint) != closed.end()) return false;
    }
  }
  return true;
}

bool uses_only_characters(const Compression& c, std::size_t k_check) {
  const ModelInstance& m = *c.model;
  for (PointerId id : c.dict_pointers) {
    const Pointer& p = m.pointer(id);
    if (p.kind == PointerKind::DictString && m.candidates().length(p.target) <= k_check) return false;
  }
  return true;
}

bool alpha_depth_check(const CompressJob& job, double alpha, std::size_t k_check) {
  if (k_check < 1 || !(alpha * static_cast<double>(k_check) < 1.0)) {
    throw Error(ErrorKind::InvalidParam, "alpha must be below 1 / k_check");
  }
  CompressJob j = job;
  j.cost_kind = CostKind::Scheme;
  j.scheme.alpha = alpha;
  return uses_only_characters(compress(j).compression, k_check);
}

}  // namespace dracula
