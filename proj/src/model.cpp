#include "dracula/model.hpp"

#include <algorithm>
#include <tuple>

#include "dracula/error.hpp"

namespace dracula {

std::string_view pointer_kind_name(PointerKind kind) {
  switch (kind) {
    case PointerKind::Document: return "document";
    case PointerKind::DictString: return "string";
    case PointerKind::DictChar: return "char";
  }
  return "unknown";
}

PointerUniverse build_pointers(const Corpus& /*corpus*/, const CandidateSet& candidates, bool cfl_mode) {
  if (candidates.size() == 0) throw Error(ErrorKind::InvalidParam, "empty candidate set");
  PointerUniverse out;
  out.cfl_mode = cfl_mode;

  std::vector<Pointer> docs;
  for (CandidateId c = 0; c < candidates.size(); ++c) {
    const auto len = static_cast<std::uint32_t>(candidates.length(c));
    for (const auto& occ : candidates.occurrences(c)) {
      docs.push_back({PointerKind::Document, occ.doc, occ.start, c, len});
    }
  }
  std::sort(docs.begin(), docs.end(), [](const Pointer& a, const Pointer& b) {
    return std::tie(a.target, a.location, a.source) < std::tie(b.target, b.location, b.source);
  });
  out.num_document = docs.size();
  out.pointers = std::move(docs);

  for (CandidateId s = 0; s < candidates.size(); ++s) {
    const Text& text = candidates.text(s);
    std::vector<Pointer> dict;
    for (std::uint32_t l = 1; l <= text.size(); ++l) {
      dict.push_back({PointerKind::DictChar, s, l, text[l - 1], 1});
    }
    if (!cfl_mode) {
      for (const auto& sub : candidates.substrings(s)) {
        const auto len = static_cast<std::uint32_t>(candidates.length(sub.candidate));
        if (len < 2) continue;  // unigrams are characters inside the dictionary
        dict.push_back({PointerKind::DictString, s, sub.start, sub.candidate, len});
      }
    }
    std::sort(dict.begin(), dict.end(), [](const Pointer& a, const Pointer& b) {
      const int ka = a.kind == PointerKind::DictChar ? 0 : 1;
      const int kb = b.kind == PointerKind::DictChar ? 0 : 1;
      return std::tie(a.location, ka, a.source) < std::tie(b.location, kb, b.source);
    });
    out.pointers.insert(out.pointers.end(), dict.begin(), dict.end());
  }
  return out;
}

namespace {

void check_scheme(const CostScheme& scheme) {
  if (!(scheme.tau >= 0.0) || !std::isfinite(scheme.tau)) {
    throw Error(ErrorKind::InvalidParam, "tau must be a finite value >= 0");
  }
  if (!(scheme.lambda >= 0.0) || !std::isfinite(scheme.lambda)) {
    throw Error(ErrorKind::InvalidParam, "lambda must be a finite value >= 0");
  }
  if (!(scheme.alpha >= 0.0 && scheme.alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidParam, "alpha must lie in [0, 1]");
  }
}

}  // namespace

CostModel scheme_costs(const PointerUniverse& universe, const CandidateSet& candidates,
                       const CostScheme& scheme) {
  check_scheme(scheme);
  CostModel costs;
  costs.scheme = scheme;
  costs.string_cost.assign(candidates.size(), scheme.tau);
  costs.pointer_cost.reserve(universe.size());
  for (const auto& p : universe.pointers) {
    switch (p.kind) {
      case PointerKind::Document: costs.pointer_cost.push_back(1.0); break;
      case PointerKind::DictString: costs.pointer_cost.push_back(scheme.lambda); break;
      case PointerKind::DictChar: costs.pointer_cost.push_back(scheme.alpha * scheme.lambda); break;
    }
  }
  return costs;
}

CostModel bon_landmark_costs(const PointerUniverse& universe, const CandidateSet& candidates,
                             std::size_t max_len) {
  if (max_len < 1) throw Error(ErrorKind::InvalidParam, "bag-of-n-grams length must be >= 1");
  CostModel costs;
  costs.negative = true;
  costs.string_cost.resize(candidates.size());
  for (CandidateId s = 0; s < candidates.size(); ++s) {
    costs.string_cost[s] = candidates.length(s) <= max_len ? -1.0 : kInfiniteCost;
  }
  costs.pointer_cost.reserve(universe.size());
  for (const auto& p : universe.pointers) {
    bool ok = true;
    if (p.uses_string()) ok = candidates.length(p.source) <= max_len;
    if (!p.is_document()) ok = ok && candidates.length(p.target) <= max_len;
    costs.pointer_cost.push_back(ok ? -1.0 : kInfiniteCost);
  }
  return costs;
}

CostModel plaintext_costs(const PointerUniverse& universe, const CandidateSet& candidates) {
  CostModel costs;
  costs.string_cost.resize(candidates.size());
  for (CandidateId s = 0; s < candidates.size(); ++s) {
    costs.string_cost[s] = static_cast<double>(candidates.length(s));
  }
  costs.pointer_cost.reserve(universe.size());
  for (const auto& p : universe.pointers) {
    costs.pointer_cost.push_back(p.kind == PointerKind::DictChar ? 0.0 : 1.0);
  }
  return costs;
}

ModelInstance::ModelInstance(std::shared_ptr<const Corpus> corpus,
                             std::shared_ptr<const CandidateSet> candidates,
                             const PointerUniverse& universe, const CostModel& costs)
    : corpus_(std::move(corpus)),
      candidates_(std::move(candidates)),
      string_cost_(costs.string_cost),
      costs_(costs),
      cfl_mode_(universe.cfl_mode) {
  if (costs.pointer_cost.size() != universe.size() || string_cost_.size() != candidates_->size()) {
    throw Error(ErrorKind::DimensionMismatch, "cost model does not match the pointer universe");
  }
  for (CandidateId s = 0; s < string_cost_.size(); ++s) {
    if (allowed(s)) strings_.push_back(s);
  }
  by_doc_.resize(corpus_->size());
  by_string_.resize(candidates_->size());
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const Pointer& p = universe.pointers[i];
    const double c = costs.pointer_cost[i];
    if (!std::isfinite(c)) continue;
    if (p.uses_string() && !allowed(p.source)) continue;
    if (!p.is_document() && !allowed(p.target)) continue;
    const auto id = static_cast<PointerId>(pointers_.size());
    pointers_.push_back(p);
    pointer_cost_.push_back(c);
    (p.is_document() ? by_doc_[p.target] : by_string_[p.target]).push_back(id);
  }
}

std::optional<PointerId> ModelInstance::find_pointer(const Pointer& p) const {
  const auto& list = p.is_document() ? by_doc_.at(p.target) : by_string_.at(p.target);
  for (PointerId id : list) {
    const Pointer& q = pointers_[id];
    if (q.kind == p.kind && q.location == p.location && q.source == p.source) return id;
  }
  return std::nullopt;
}

void ModelInstance::set_cuts(const EquivalenceClasses& classes) {
  cuts_.clear();
  for (const auto& members : classes.classes) {
    std::vector<CandidateId> kept;
    for (CandidateId s : members) {
      if (allowed(s)) kept.push_back(s);
    }
    if (kept.size() >= 2) cuts_.push_back(std::move(kept));
  }
}

}  // namespace dracula
