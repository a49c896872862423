#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dracula {

using SymbolId = std::uint32_t;
using CandidateId = std::uint32_t;
using DocId = std::uint32_t;
using Text = std::vector<SymbolId>;

enum class Mode { Char, Token };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);

struct TextHash {
  std::size_t operator()(const Text& text) const noexcept;
};

/// Interned alphabet. Symbols are stored in byte-lexicographic order so that
/// symbol ids, and everything ordered by them, do not depend on the order in
/// which documents were ingested.
class SymbolTable {
 public:
  SymbolTable() = default;
  SymbolTable(std::vector<std::string> sorted_unique_symbols, Mode mode);

  std::size_t size() const noexcept { return symbols_.size(); }
  Mode mode() const noexcept { return mode_; }
  const std::string& symbol(SymbolId id) const { return symbols_.at(id); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::optional<SymbolId> find(std::string_view symbol) const;

  /// Renders a symbol sequence: concatenated in char mode, space-joined in token mode.
  std::string render(std::span<const SymbolId> text) const;

  bool operator==(const SymbolTable&) const = default;

 private:
  std::vector<std::string> symbols_;
  Mode mode_ = Mode::Char;
};

struct Document {
  DocId id = 0;
  Text symbols;

  std::size_t size() const noexcept { return symbols.size(); }
  bool operator==(const Document&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Document> docs, SymbolTable table);

  std::size_t size() const noexcept { return docs_.size(); }
  const Document& doc(DocId id) const { return docs_.at(id); }
  const std::vector<Document>& docs() const noexcept { return docs_; }
  const SymbolTable& table() const noexcept { return table_; }
  std::size_t total_length() const noexcept;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Document> docs_;
  SymbolTable table_;
};

/// Splits raw texts into symbols (UTF-8 code points or whitespace tokens) and
/// interns them. Throws EmptyCorpus / EmptyDocument.
Corpus ingest(const std::vector<std::string>& texts, Mode mode);

/// Inverse of ingest: one raw text per document.
std::vector<std::string> serialize(const Corpus& corpus);

/// A file holds one document per line; a directory holds one document per
/// regular file (files taken in name order).
Corpus read_corpus(const std::filesystem::path& path, Mode mode);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct Occurrence {
  DocId doc = 0;
  std::uint32_t start = 0;  // 1-based

  auto operator<=>(const Occurrence&) const = default;
};

/// A candidate occurring inside another candidate.
struct SubstringRef {
  CandidateId candidate = 0;
  std::uint32_t start = 0;  // 1-based, within the enclosing candidate

  auto operator<=>(const SubstringRef&) const = default;
};

struct CandidateParams {
  std::size_t max_len = 1;
  std::size_t min_count = 1;
};

/// The n-gram universe: every substring of length <= max_len occurring at
/// least min_count times, ordered by (length, symbol ids).
class CandidateSet {
 public:
  std::size_t size() const noexcept { return texts_.size(); }
  const Text& text(CandidateId id) const { return texts_.at(id); }
  std::size_t length(CandidateId id) const { return texts_.at(id).size(); }
  std::span<const Occurrence> occurrences(CandidateId id) const;
  std::size_t count(CandidateId id) const { return occurrences(id).size(); }
  /// Every occurrence of a candidate strictly shorter than `id` inside `id`,
  /// ordered by (start, length).
  std::span<const SubstringRef> substrings(CandidateId id) const { return substrings_.at(id); }
  std::optional<CandidateId> find(const Text& text) const;
  const CandidateParams& params() const noexcept { return params_; }
  /// Candidates sharing a key have identical occurrence start sets.
  std::uint32_t class_key(CandidateId id) const { return class_key_.at(id); }

 private:
  friend CandidateSet enumerate_candidates(const Corpus&, std::size_t, std::size_t);

  CandidateParams params_;
  std::vector<Text> texts_;
  std::vector<std::uint32_t> class_key_;
  std::vector<std::vector<Occurrence>> class_occurrences_;
  std::vector<std::vector<SubstringRef>> substrings_;
  std::unordered_map<Text, CandidateId, TextHash> index_;
};

/// Builds a generalized suffix automaton over the reversed documents, so each
/// automaton state groups the substrings that share one set of start
/// positions. Substrings never cross document boundaries.
CandidateSet enumerate_candidates(const Corpus& corpus, std::size_t max_len, std::size_t min_count);

struct EquivalenceClasses {
  std::vector<std::vector<CandidateId>> classes;  // members sorted by length
  std::vector<CandidateId> representative;        // longest member per class
  std::vector<std::size_t> class_of;              // candidate -> class index

  std::size_t size() const noexcept { return classes.size(); }
};

/// Right-extension classes: s and s+c share a class iff every occurrence of s
/// is followed by c.
EquivalenceClasses equivalence_classes(const CandidateSet& candidates);

}  // namespace dracula
