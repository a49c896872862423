#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dracula/corpus.hpp"

namespace dracula {

using PointerId = std::uint32_t;

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

enum class PointerKind : std::uint8_t {
  Document,    // reconstructs a document; source is a candidate
  DictString,  // reconstructs a candidate from a proper, non-unigram sub-candidate
  DictChar,    // reconstructs a candidate from one character; source is a symbol id
};

std::string_view pointer_kind_name(PointerKind kind);

/// (target, location, source): the source string is pasted into the target at
/// the 1-based location.
struct Pointer {
  PointerKind kind = PointerKind::Document;
  std::uint32_t target = 0;    // DocId for Document, CandidateId otherwise
  std::uint32_t location = 0;  // 1-based
  std::uint32_t source = 0;    // CandidateId, or SymbolId for DictChar
  std::uint32_t length = 0;    // length of the source

  bool is_document() const noexcept { return kind == PointerKind::Document; }
  /// Pointers that require their source to be in the dictionary.
  bool uses_string() const noexcept { return kind != PointerKind::DictChar; }
  std::uint32_t end() const noexcept { return location + length - 1; }

  auto operator<=>(const Pointer&) const = default;
};

/// All valid pointers for a corpus and candidate set, ordered document
/// pointers first (by doc, location, source), then dictionary pointers (by
/// target, location, characters before strings, source).
struct PointerUniverse {
  std::vector<Pointer> pointers;
  std::size_t num_document = 0;
  bool cfl_mode = false;

  std::size_t size() const noexcept { return pointers.size(); }
};

PointerUniverse build_pointers(const Corpus& corpus, const CandidateSet& candidates, bool cfl_mode);

/// Parametric storage-cost scheme: document pointers cost 1, dictionary
/// membership costs tau, dictionary pointers cost lambda (strings) or
/// alpha*lambda (characters).
struct CostScheme {
  double tau = 0.0;
  double lambda = 1.0;
  double alpha = 1.0;
};

/// Per-pointer and per-string costs aligned with the universe and candidate
/// ids. An infinite entry excludes the variable.
struct CostModel {
  std::vector<double> pointer_cost;
  std::vector<double> string_cost;
  std::optional<CostScheme> scheme;
  bool negative = false;  // set only by the bag-of-n-grams landmark
};

CostModel scheme_costs(const PointerUniverse& universe, const CandidateSet& candidates,
                       const CostScheme& scheme);

/// Landmark whose optimum keeps every pointer over strings of length <= max_len:
/// all those costs are -1, longer strings are excluded.
CostModel bon_landmark_costs(const PointerUniverse& universe, const CandidateSet& candidates,
                             std::size_t max_len);

/// Plaintext dictionary storage: d_s = |s|, document pointers 1, character
/// pointers free, string pointers 1. Paired with cfl_mode this is the shallow model.
CostModel plaintext_costs(const PointerUniverse& universe, const CandidateSet& candidates);

/// The finite-cost part of a universe, with dense ids and per-target indexes.
class ModelInstance {
 public:
  ModelInstance(std::shared_ptr<const Corpus> corpus, std::shared_ptr<const CandidateSet> candidates,
                const PointerUniverse& universe, const CostModel& costs);

  const Corpus& corpus() const noexcept { return *corpus_; }
  const CandidateSet& candidates() const noexcept { return *candidates_; }
  std::shared_ptr<const Corpus> corpus_ptr() const noexcept { return corpus_; }
  std::shared_ptr<const CandidateSet> candidates_ptr() const noexcept { return candidates_; }

  std::size_t num_pointers() const noexcept { return pointers_.size(); }
  const Pointer& pointer(PointerId id) const { return pointers_.at(id); }
  const std::vector<Pointer>& pointers() const noexcept { return pointers_; }
  double pointer_cost(PointerId id) const { return pointer_cost_.at(id); }

  /// Candidates with finite dictionary cost, in candidate-id order.
  const std::vector<CandidateId>& strings() const noexcept { return strings_; }
  bool allowed(CandidateId id) const { return std::isfinite(string_cost_.at(id)); }
  double string_cost(CandidateId id) const { return string_cost_.at(id); }

  const std::vector<PointerId>& doc_pointers(DocId doc) const { return by_doc_.at(doc); }
  const std::vector<PointerId>& dict_pointers(CandidateId target) const { return by_string_.at(target); }
  /// Pointer id for a (kind, target, location, source) tuple, if present.
  std::optional<PointerId> find_pointer(const Pointer& p) const;

  bool cfl_mode() const noexcept { return cfl_mode_; }
  const CostModel& costs() const noexcept { return costs_; }
  bool negative_costs() const noexcept { return costs_.negative; }

  /// Equivalence-class constraints (sum of t over a class <= 1); only classes
  /// with at least two allowed members are kept.
  const std::vector<std::vector<CandidateId>>& cuts() const noexcept { return cuts_; }
  void set_cuts(const EquivalenceClasses& classes);
  void clear_cuts() { cuts_.clear(); }

 private:
  std::shared_ptr<const Corpus> corpus_;
  std::shared_ptr<const CandidateSet> candidates_;
  std::vector<Pointer> pointers_;
  std::vector<double> pointer_cost_;
  std::vector<double> string_cost_;
  std::vector<CandidateId> strings_;
  std::vector<std::vector<PointerId>> by_doc_;
  std::vector<std::vector<PointerId>> by_string_;
  CostModel costs_;
  bool cfl_mode_ = false;
  std::vector<std::vector<CandidateId>> cuts_;
};

}  // namespace dracula
