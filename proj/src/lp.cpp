#include "dracula/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "dracula/error.hpp"
#include "dracula/recon.hpp"

namespace dracula {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

std::uint32_t target_length(const ModelInstance& model, const Pointer& p) {
  return static_cast<std::uint32_t>(p.is_document() ? model.corpus().doc(p.target).size()
                                                    : model.candidates().length(p.target));
}

const Text& target_text(const ModelInstance& model, const Pointer& p) {
  return p.is_document() ? model.corpus().doc(p.target).symbols : model.candidates().text(p.target);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Cheapest cover of one target using pointers whose source is in the
// dictionary (membership given as a lookup by candidate id).
std::optional<ReconResult> cover(const ModelInstance& model, const std::vector<PointerId>& ids,
                                 std::size_t length, const std::vector<char>& in_dict) {
  ReconInstance inst;
  inst.target_length = length;
  for (PointerId id : ids) {
    const Pointer& p = model.pointer(id);
    if (p.uses_string() && !in_dict[p.source]) continue;
    inst.intervals.push_back({p.location, p.length, model.pointer_cost(id), 1.0, id});
  }
  return try_solve_dp(inst);
}

std::vector<char> membership(const ModelInstance& model, const std::vector<CandidateId>& dictionary) {
  std::vector<char> in(model.candidates().size(), 0);
  for (CandidateId s : dictionary) in[s] = 1;
  return in;
}

}  // namespace

LpInstance build_lp(std::shared_ptr<const ModelInstance> model, bool cuts) {
  LpInstance out;
  out.model = model;
  const ModelInstance& m = *model;
  auto& prog = out.program;
  auto& lay = out.layout;

  lay.t_var.assign(m.candidates().size(), -1);
  for (CandidateId s : m.strings()) {
    lay.t_var[s] = static_cast<std::int64_t>(lay.t_candidate.size());
    lay.t_candidate.push_back(s);
    prog.add_variable(m.string_cost(s), 1.0, "t" + std::to_string(s));
  }
  lay.w_offset = lay.t_candidate.size();
  for (PointerId p = 0; p < m.num_pointers(); ++p) {
    prog.add_variable(m.pointer_cost(p), 1.0, "w" + std::to_string(p));
    (m.pointer(p).is_document() ? lay.num_doc_w : lay.num_dict_w) += 1;
  }

  auto tv = [&](CandidateId s) { return static_cast<std::uint32_t>(lay.t_var[s]); };
  auto wv = [&](PointerId p) { return static_cast<std::uint32_t>(lay.w_var(p)); };

  for (DocId k = 0; k < m.corpus().size(); ++k) {
    const std::size_t n = m.corpus().doc(k).size();
    std::vector<std::vector<LinearProgram::Term>> rows(n);
    for (PointerId p : m.doc_pointers(k)) {
      const Pointer& ptr = m.pointer(p);
      for (std::uint32_t l = ptr.location; l <= ptr.end(); ++l) rows[l - 1].push_back({wv(p), 1.0});
    }
    for (std::size_t i = 0; i < n; ++i) {
      prog.add_row(std::move(rows[i]), RowSense::GreaterEqual, 1.0,
                   "d" + std::to_string(k) + "_" + std::to_string(i + 1));
      ++lay.doc_coverage_rows;
    }
  }
  for (CandidateId s : m.strings()) {
    const std::size_t n = m.candidates().length(s);
    std::vector<std::vector<LinearProgram::Term>> rows(n);
    for (PointerId p : m.dict_pointers(s)) {
      const Pointer& ptr = m.pointer(p);
      for (std::uint32_t l = ptr.location; l <= ptr.end(); ++l) rows[l - 1].push_back({wv(p), 1.0});
    }
    for (std::size_t i = 0; i < n; ++i) {
      rows[i].push_back({tv(s), -1.0});
      prog.add_row(std::move(rows[i]), RowSense::GreaterEqual, 0.0,
                   "s" + std::to_string(s) + "_" + std::to_string(i + 1));
      ++lay.dict_coverage_rows;
    }
  }
  for (PointerId p = 0; p < m.num_pointers(); ++p) {
    const Pointer& ptr = m.pointer(p);
    if (!ptr.uses_string()) continue;
    prog.add_row({{wv(p), 1.0}, {tv(ptr.source), -1.0}}, RowSense::LessEqual, 0.0,
                 "link" + std::to_string(p));
    ++lay.linking_rows;
  }
  if (cuts) {
    add_equivalence_cuts(out, equivalence_classes(m.candidates()).classes);
  }
  return out;
}

void add_equivalence_cuts(LpInstance& lp, const std::vector<std::vector<CandidateId>>& classes) {
  for (const auto& members : classes) {
    std::vector<LinearProgram::Term> terms;
    for (CandidateId s : members) {
      if (s < lp.layout.t_var.size() && lp.layout.t_var[s] >= 0) {
        terms.push_back({static_cast<std::uint32_t>(lp.layout.t_var[s]), 1.0});
      }
    }
    if (terms.size() < 2) continue;
    lp.program.add_row(std::move(terms), RowSense::LessEqual, 1.0,
                       "cut" + std::to_string(lp.layout.cut_rows));
    ++lp.layout.cut_rows;
  }
}

bool LpSolution::integral(double tol) const {
  return std::all_of(values.begin(), values.end(),
                     [&](double v) { return std::abs(v) <= tol || std::abs(v - 1.0) <= tol; });
}

LpSolution solve_simplex(const LpInstance& lp, SimplexOptions options) {
  if (lp.model && lp.model->negative_costs()) {
    throw Error(ErrorKind::InvalidParam, "negative-cost models are solved by inspection");
  }
  const auto res = solve_lp(lp.program, options);
  if (res.status == LpStatus::Infeasible) {
    throw Error(ErrorKind::Infeasible, "the relaxation is infeasible (a document position has no pointer)");
  }
  if (res.status == LpStatus::Unbounded) {
    throw Error(ErrorKind::NumericalFailure, "the relaxation reported an unbounded ray");
  }
  LpSolution out;
  out.status = res.status;
  out.values = res.x;
  out.objective = res.objective;
  out.iterations = res.iterations;
  out.basic_structural = res.basic_structural;
  out.max_violation = res.max_violation;
  return out;
}

double t_value(const LpInstance& lp, const LpSolution& sol, CandidateId s) {
  const auto v = lp.layout.t_var.at(s);
  return v < 0 ? 0.0 : sol.values.at(static_cast<std::size_t>(v));
}

double w_value(const LpInstance& lp, const LpSolution& sol, PointerId p) {
  return sol.values.at(lp.layout.w_var(p));
}

double evaluate_objective(const ModelInstance& model, const std::vector<CandidateId>& dictionary,
                          const std::vector<PointerId>& doc_pointers,
                          const std::vector<PointerId>& dict_pointers) {
  double total = 0.0;
  for (CandidateId s : dictionary) total += model.string_cost(s);
  for (PointerId p : doc_pointers) total += model.pointer_cost(p);
  for (PointerId p : dict_pointers) total += model.pointer_cost(p);
  return total;
}

ValidityReport validate(const Compression& c) {
  ValidityReport rep;
  auto fail = [&](std::string msg) { rep.problems.push_back(std::move(msg)); };
  if (!c.model) {
    fail("no model attached");
    return rep;
  }
  const ModelInstance& m = *c.model;
  const std::size_t nc = m.candidates().size();

  if (!std::is_sorted(c.dictionary.begin(), c.dictionary.end()) ||
      std::adjacent_find(c.dictionary.begin(), c.dictionary.end()) != c.dictionary.end()) {
    fail("dictionary is not a sorted set");
  }
  std::vector<char> in(nc, 0);
  for (CandidateId s : c.dictionary) {
    if (s >= nc || !m.allowed(s)) {
      fail("dictionary string " + std::to_string(s) + " is not an allowed candidate");
      continue;
    }
    in[s] = 1;
  }

  std::vector<std::vector<std::uint32_t>> doc_cover(m.corpus().size());
  for (DocId k = 0; k < m.corpus().size(); ++k) doc_cover[k].assign(m.corpus().doc(k).size(), 0);
  std::vector<std::vector<std::uint32_t>> str_cover(nc);
  for (CandidateId s : c.dictionary) {
    if (s < nc) str_cover[s].assign(m.candidates().length(s), 0);
  }
  std::vector<std::vector<CandidateId>> uses(nc);

  auto check_pointer = [&](PointerId id, bool want_doc) -> bool {
    if (id >= m.num_pointers()) {
      fail("pointer id " + std::to_string(id) + " out of range");
      return false;
    }
    const Pointer& p = m.pointer(id);
    const std::string tag = "pointer " + std::to_string(id);
    if (p.is_document() != want_doc) {
      fail(tag + " is listed under the wrong kind");
      return false;
    }
    if (p.location < 1 || p.end() > target_length(m, p)) {
      fail(tag + " runs outside its target");
      return false;
    }
    const Text& t = target_text(m, p);
    if (p.kind == PointerKind::DictChar) {
      if (p.length != 1 || t[p.location - 1] != p.source) fail(tag + " does not match its target text");
    } else {
      const Text& src = m.candidates().text(p.source);
      if (src.size() != p.length || !std::equal(src.begin(), src.end(), t.begin() + (p.location - 1))) {
        fail(tag + " does not match its target text");
      }
      if (!in[p.source]) fail(tag + " uses string " + std::to_string(p.source) + " outside the dictionary");
    }
    if (p.kind == PointerKind::DictString && p.length >= target_length(m, p)) {
      fail(tag + " source is not a proper substring");
    }
    if (!want_doc && !in[p.target]) {
      fail(tag + " reconstructs a string outside the dictionary");
      return false;
    }
    return true;
  };

  for (PointerId id : c.doc_pointers) {
    if (!check_pointer(id, true)) continue;
    const Pointer& p = m.pointer(id);
    for (std::uint32_t l = p.location; l <= p.end(); ++l) ++doc_cover[p.target][l - 1];
  }
  for (PointerId id : c.dict_pointers) {
    if (!check_pointer(id, false)) continue;
    const Pointer& p = m.pointer(id);
    for (std::uint32_t l = p.location; l <= p.end(); ++l) ++str_cover[p.target][l - 1];
    if (p.kind == PointerKind::DictString) uses[p.target].push_back(p.source);
  }
  for (DocId k = 0; k < doc_cover.size(); ++k) {
    for (std::size_t i = 0; i < doc_cover[k].size(); ++i) {
      if (doc_cover[k][i] == 0) {
        fail("document " + std::to_string(k) + " position " + std::to_string(i + 1) + " uncovered");
      }
    }
  }
  for (CandidateId s : c.dictionary) {
    if (s >= nc) continue;
    for (std::size_t i = 0; i < str_cover[s].size(); ++i) {
      if (str_cover[s][i] == 0) {
        fail("string " + std::to_string(s) + " position " + std::to_string(i + 1) + " uncovered");
      }
    }
  }

  // Acyclicity of the string -> source graph (Kahn's algorithm).
  std::vector<std::size_t> indeg(nc, 0);
  for (CandidateId s = 0; s < nc; ++s) {
    for (CandidateId u : uses[s]) ++indeg[u];
  }
  std::vector<CandidateId> queue;
  for (CandidateId s = 0; s < nc; ++s) {
    if (indeg[s] == 0) queue.push_back(s);
  }
  std::size_t seen = 0;
  while (!queue.empty()) {
    const CandidateId s = queue.back();
    queue.pop_back();
    ++seen;
    for (CandidateId u : uses[s]) {
      if (--indeg[u] == 0) queue.push_back(u);
    }
  }
  if (seen != nc) fail("dictionary reconstruction graph has a cycle");

  const double obj = evaluate_objective(m, c.dictionary, c.doc_pointers, c.dict_pointers);
  if (!close(obj, c.objective, 1e-9)) {
    fail("stored objective " + std::to_string(c.objective) + " differs from " + std::to_string(obj));
  }
  return rep;
}

std::uint64_t fingerprint(const Compression& c) {
  std::uint64_t h = kFnvOffset;
  mix(h, c.dictionary.size());
  for (auto s : c.dictionary) mix(h, s);
  mix(h, c.doc_pointers.size());
  for (auto p : c.doc_pointers) mix(h, p);
  mix(h, c.dict_pointers.size());
  for (auto p : c.dict_pointers) mix(h, p);
  return h;
}

std::uint64_t fingerprint(const LpInstance& lp, const LpSolution& sol) {
  std::uint64_t h = kFnvOffset;
  mix(h, lp.program.num_vars());
  for (std::size_t j = 0; j < sol.values.size(); ++j) {
    const auto q = static_cast<std::int64_t>(std::llround(sol.values[j] * 1e6));
    if (q == 0) continue;
    mix(h, j);
    mix(h, static_cast<std::uint64_t>(q));
  }
  return h;
}

Compression reconstruct(std::shared_ptr<const ModelInstance> model, std::vector<CandidateId> dictionary) {
  const ModelInstance& m = *model;
  if (m.negative_costs()) throw Error(ErrorKind::InvalidParam, "reconstruction needs nonnegative costs");
  std::sort(dictionary.begin(), dictionary.end());
  dictionary.erase(std::unique(dictionary.begin(), dictionary.end()), dictionary.end());

  Compression out;
  out.model = model;
  for (;;) {
    const auto in = membership(m, dictionary);
    std::vector<PointerId> docs;
    for (DocId k = 0; k < m.corpus().size(); ++k) {
      auto res = cover(m, m.doc_pointers(k), m.corpus().doc(k).size(), in);
      if (!res) {
        throw Error(ErrorKind::Infeasible,
                    "document " + std::to_string(k) + " cannot be covered by the dictionary");
      }
      docs.insert(docs.end(), res->chosen.begin(), res->chosen.end());
    }
    std::vector<std::vector<PointerId>> dict(m.candidates().size());
    for (CandidateId s : dictionary) {
      auto res = cover(m, m.dict_pointers(s), m.candidates().length(s), in);
      if (!res) throw Error(ErrorKind::Infeasible, "string " + std::to_string(s) + " cannot be covered");
      dict[s].assign(res->chosen.begin(), res->chosen.end());
    }

    // Strings reachable from the documents through the chosen pointers.
    std::vector<char> used(m.candidates().size(), 0);
    std::vector<CandidateId> stack;
    for (PointerId p : docs) {
      const CandidateId s = m.pointer(p).source;
      if (!used[s]) {
        used[s] = 1;
        stack.push_back(s);
      }
    }
    while (!stack.empty()) {
      const CandidateId s = stack.back();
      stack.pop_back();
      for (PointerId p : dict[s]) {
        const Pointer& ptr = m.pointer(p);
        if (ptr.kind != PointerKind::DictString || used[ptr.source]) continue;
        used[ptr.source] = 1;
        stack.push_back(ptr.source);
      }
    }
    std::vector<CandidateId> kept;
    for (CandidateId s : dictionary) {
      if (used[s]) kept.push_back(s);
    }
    if (kept.size() == dictionary.size()) {
      out.dictionary = std::move(dictionary);
      out.doc_pointers = std::move(docs);
      for (CandidateId s : out.dictionary) {
        out.dict_pointers.insert(out.dict_pointers.end(), dict[s].begin(), dict[s].end());
      }
      break;
    }
    dictionary = std::move(kept);
  }
  std::sort(out.doc_pointers.begin(), out.doc_pointers.end());
  std::sort(out.dict_pointers.begin(), out.dict_pointers.end());
  out.objective = evaluate_objective(m, out.dictionary, out.doc_pointers, out.dict_pointers);
  return out;
}

Compression round_solution(const LpInstance& lp, const LpSolution& sol, double threshold) {
  const ModelInstance& m = *lp.model;
  if (sol.integral(threshold)) {
    Compression out;
    out.model = lp.model;
    for (std::size_t j = 0; j < lp.layout.num_t(); ++j) {
      if (sol.values[j] > 0.5) out.dictionary.push_back(lp.layout.t_candidate[j]);
    }
    std::sort(out.dictionary.begin(), out.dictionary.end());
    for (PointerId p = 0; p < m.num_pointers(); ++p) {
      if (sol.values[lp.layout.w_var(p)] <= 0.5) continue;
      (m.pointer(p).is_document() ? out.doc_pointers : out.dict_pointers).push_back(p);
    }
    out.objective = evaluate_objective(m, out.dictionary, out.doc_pointers, out.dict_pointers);
    return out;
  }
  return reconstruct(lp.model, lp_support(lp, sol, threshold));
}

std::vector<CandidateId> lp_support(const LpInstance& lp, const LpSolution& sol, double threshold) {
  std::vector<CandidateId> out;
  for (std::size_t j = 0; j < lp.layout.num_t(); ++j) {
    if (sol.values[j] > threshold) out.push_back(lp.layout.t_candidate[j]);
  }
  return out;
}

Compression polish(const Compression& start, const std::vector<CandidateId>& pool, std::size_t max_steps) {
  Compression best = start;
  std::vector<CandidateId> moves = pool;
  moves.insert(moves.end(), start.dictionary.begin(), start.dictionary.end());
  std::sort(moves.begin(), moves.end());
  moves.erase(std::unique(moves.begin(), moves.end()), moves.end());

  std::optional<Compression> next;
  auto consider = [&](std::vector<CandidateId> dict) {
    Compression trial;
    try {
      trial = reconstruct(best.model, std::move(dict));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Infeasible) throw;
      return;
    }
    const double bar = next ? next->objective : best.objective;
    if (trial.objective < bar - 1e-9 * std::max(1.0, std::abs(bar))) next = std::move(trial);
  };
  auto toggled = [](std::vector<CandidateId> dict, CandidateId s) {
    auto it = std::lower_bound(dict.begin(), dict.end(), s);
    if (it != dict.end() && *it == s) {
      dict.erase(it);
    } else {
      dict.insert(it, s);
    }
    return dict;
  };

  for (std::size_t step = 0; step < max_steps; ++step) {
    next.reset();
    for (CandidateId s : moves) consider(toggled(best.dictionary, s));
    // Swaps only when no single add or drop helps.
    if (!next) {
      for (CandidateId out : best.dictionary) {
        const auto without = toggled(best.dictionary, out);
        for (CandidateId in : moves) {
          if (std::binary_search(best.dictionary.begin(), best.dictionary.end(), in)) continue;
          consider(toggled(without, in));
        }
      }
    }
    if (!next) break;
    best = std::move(*next);
  }
  return best;
}

Compression exact_solve(std::shared_ptr<const ModelInstance> model, std::size_t limit) {
  const ModelInstance& m = *model;
  if (m.negative_costs()) throw Error(ErrorKind::InvalidParam, "exact search needs nonnegative costs");
  const auto& strings = m.strings();
  const std::size_t k = strings.size();
  if (k > limit || k >= 63) {
    throw Error(ErrorKind::TooLarge, std::to_string(k) + " candidate strings exceed the exact-search limit of " +
                                         std::to_string(limit));
  }
  std::vector<std::size_t> bit(m.candidates().size(), 0);
  for (std::size_t i = 0; i < k; ++i) bit[strings[i]] = i;
  std::vector<std::uint64_t> cut_masks;
  for (const auto& cls : m.cuts()) {
    std::uint64_t mask = 0;
    for (CandidateId s : cls) mask |= std::uint64_t{1} << bit[s];
    cut_masks.push_back(mask);
  }

  double best = kInfiniteCost;
  std::vector<CandidateId> best_dict;
  bool found = false;
  std::vector<char> in(m.candidates().size(), 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    bool skip = false;
    for (auto cm : cut_masks) {
      const auto hit = mask & cm;
      if (hit & (hit - 1)) {
        skip = true;
        break;
      }
    }
    if (skip) continue;
    std::vector<CandidateId> dict;
    for (std::size_t i = 0; i < k; ++i) {
      const bool on = (mask >> i) & 1U;
      in[strings[i]] = on ? 1 : 0;
      if (on) dict.push_back(strings[i]);
    }
    double total = 0.0;
    for (CandidateId s : dict) total += m.string_cost(s);
    bool feasible = true;
    for (DocId d = 0; d < m.corpus().size() && feasible; ++d) {
      auto res = cover(m, m.doc_pointers(d), m.corpus().doc(d).size(), in);
      if (res) total += res->cost; else feasible = false;
    }
    for (CandidateId s : dict) {
      if (!feasible) break;
      auto res = cover(m, m.dict_pointers(s), m.candidates().length(s), in);
      if (res) total += res->cost; else feasible = false;
    }
    if (!feasible) continue;
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    bool better = !found || total < best - tol;
    if (!better && std::abs(total - best) <= tol) {
      better = dict.size() < best_dict.size() || (dict.size() == best_dict.size() && dict < best_dict);
    }
    if (better) {
      found = true;
      best = total;
      best_dict = std::move(dict);
    }
  }
  if (!found) throw Error(ErrorKind::Infeasible, "no dictionary subset covers every document");

  Compression out;
  out.model = model;
  out.dictionary = best_dict;
  const auto inb = membership(m, best_dict);
  for (DocId d = 0; d < m.corpus().size(); ++d) {
    auto res = cover(m, m.doc_pointers(d), m.corpus().doc(d).size(), inb);
    out.doc_pointers.insert(out.doc_pointers.end(), res->chosen.begin(), res->chosen.end());
  }
  for (CandidateId s : best_dict) {
    auto res = cover(m, m.dict_pointers(s), m.candidates().length(s), inb);
    out.dict_pointers.insert(out.dict_pointers.end(), res->chosen.begin(), res->chosen.end());
  }
  std::sort(out.doc_pointers.begin(), out.doc_pointers.end());
  std::sort(out.dict_pointers.begin(), out.dict_pointers.end());
  out.objective = evaluate_objective(m, out.dictionary, out.doc_pointers, out.dict_pointers);
  return out;
}

Compression take_everything(std::shared_ptr<const ModelInstance> model) {
  const ModelInstance& m = *model;
  Compression out;
  out.model = model;
  out.dictionary = m.strings();
  for (PointerId p = 0; p < m.num_pointers(); ++p) {
    (m.pointer(p).is_document() ? out.doc_pointers : out.dict_pointers).push_back(p);
  }
  out.objective = evaluate_objective(m, out.dictionary, out.doc_pointers, out.dict_pointers);
  return out;
}

}  // namespace dracula
