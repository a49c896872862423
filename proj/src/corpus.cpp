#include "dracula/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dracula/error.hpp"

namespace dracula {

std::string_view mode_name(Mode mode) { return mode == Mode::Char ? "char" : "token"; }

Mode parse_mode(std::string_view name) {
  if (name == "char") return Mode::Char;
  if (name == "token") return Mode::Token;
  throw Error(ErrorKind::InvalidParam, "unknown mode '" + std::string(name) + "'");
}

std::size_t TextHash::operator()(const Text& text) const noexcept {
  // FNV-1a over the symbol ids.
  std::uint64_t h = 1469598103934665603ULL;
  for (SymbolId s : text) {
    h ^= s;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

SymbolTable::SymbolTable(std::vector<std::string> sorted_unique_symbols, Mode mode)
    : symbols_(std::move(sorted_unique_symbols)), mode_(mode) {}

std::optional<SymbolId> SymbolTable::find(std::string_view symbol) const {
  auto it = std::lower_bound(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end() || *it != symbol) return std::nullopt;
  return static_cast<SymbolId>(it - symbols_.begin());
}

std::string SymbolTable::render(std::span<const SymbolId> text) const {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (mode_ == Mode::Token && i > 0) out.push_back(' ');
    out += symbols_.at(text[i]);
  }
  return out;
}

Corpus::Corpus(std::vector<Document> docs, SymbolTable table)
    : docs_(std::move(docs)), table_(std::move(table)) {}

std::size_t Corpus::total_length() const noexcept {
  std::size_t n = 0;
  for (const auto& d : docs_) n += d.size();
  return n;
}

namespace {

std::size_t utf8_width(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::vector<std::string> split_chars(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t w = utf8_width(static_cast<unsigned char>(text[i]));
    bool valid = i + w <= text.size();
    for (std::size_t k = 1; valid && k < w; ++k) {
      valid = (static_cast<unsigned char>(text[i + k]) >> 6) == 0x2;
    }
    if (!valid) w = 1;
    out.emplace_back(text.substr(i, w));
    i += w;
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Corpus ingest(const std::vector<std::string>& texts, Mode mode) {
  if (texts.empty()) throw Error(ErrorKind::EmptyCorpus, "no documents given");
  std::vector<std::vector<std::string>> split;
  split.reserve(texts.size());
  std::set<std::string> alphabet;
  for (std::size_t k = 0; k < texts.size(); ++k) {
    auto symbols = mode == Mode::Char ? split_chars(texts[k]) : split_tokens(texts[k]);
    if (symbols.empty()) {
      throw Error(ErrorKind::EmptyDocument, "document " + std::to_string(k) + " has no symbols");
    }
    alphabet.insert(symbols.begin(), symbols.end());
    split.push_back(std::move(symbols));
  }
  SymbolTable table(std::vector<std::string>(alphabet.begin(), alphabet.end()), mode);
  std::vector<Document> docs;
  docs.reserve(split.size());
  for (std::size_t k = 0; k < split.size(); ++k) {
    Document doc{static_cast<DocId>(k), {}};
    doc.symbols.reserve(split[k].size());
    for (const auto& s : split[k]) doc.symbols.push_back(*table.find(s));
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), std::move(table));
}

std::vector<std::string> serialize(const Corpus& corpus) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus.docs()) out.push_back(corpus.table().render(d.symbols));
  return out;
}

namespace {

std::string strip_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

Corpus read_corpus(const std::filesystem::path& path, Mode mode) {
  namespace fs = std::filesystem;
  std::vector<std::string> texts;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      texts.push_back(strip_trailing_newlines(buf.str()));
    }
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open corpus " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      texts.push_back(line);
    }
  }
  return ingest(texts, mode);
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  for (const auto& text : serialize(corpus)) {
    if (text.find('\n') != std::string::npos) {
      throw Error(ErrorKind::InvalidParam, "document contains a newline; use a directory corpus");
    }
    out << text << '\n';
  }
}

// ---------------------------------------------------------------------------
// Candidate enumeration

namespace {

struct SamState {
  std::uint32_t len = 0;
  std::int32_t link = -1;
  std::map<SymbolId, std::int32_t> next;
  std::uint64_t count = 0;
  DocId doc = 0;            // one occurrence of the state's strings
  std::uint32_t rev_end = 0;  // end index of that occurrence in the reversed document
};

class ReversedSuffixAutomaton {
 public:
  explicit ReversedSuffixAutomaton(const Corpus& corpus) {
    states_.emplace_back();
    prefix_state_.resize(corpus.size());
    for (const auto& doc : corpus.docs()) {
      std::int32_t last = 0;
      const std::size_t n = doc.size();
      prefix_state_[doc.id].reserve(n);
      for (std::size_t j = 0; j < n; ++j) {
        last = extend(last, doc.symbols[n - 1 - j], doc.id, static_cast<std::uint32_t>(j));
        states_[last].count += 1;
        prefix_state_[doc.id].push_back(last);
      }
    }
    // Propagate occurrence counts up the suffix-link tree.
    order_.resize(states_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<std::int32_t>(i);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::int32_t a, std::int32_t b) { return states_[a].len < states_[b].len; });
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const auto& s = states_[*it];
      if (s.link >= 0) states_[s.link].count += s.count;
    }
  }

  const std::vector<SamState>& states() const { return states_; }
  const std::vector<std::int32_t>& by_length() const { return order_; }
  std::int32_t prefix_state(DocId doc, std::size_t j) const { return prefix_state_[doc][j]; }
  std::uint32_t min_len(std::int32_t v) const { return states_[states_[v].link].len + 1; }

  std::int32_t step(std::int32_t v, SymbolId c) const {
    auto it = states_[v].next.find(c);
    return it == states_[v].next.end() ? -1 : it->second;
  }

 private:
  std::int32_t clone_of(std::int32_t p, std::int32_t q, SymbolId c) {
    SamState clone = states_[q];
    clone.len = states_[p].len + 1;
    clone.count = 0;
    states_.push_back(std::move(clone));
    auto id = static_cast<std::int32_t>(states_.size() - 1);
    while (p >= 0) {
      auto it = states_[p].next.find(c);
      if (it == states_[p].next.end() || it->second != q) break;
      it->second = id;
      p = states_[p].link;
    }
    states_[q].link = id;
    return id;
  }

  std::int32_t extend(std::int32_t last, SymbolId c, DocId doc, std::uint32_t rev_end) {
    if (auto q = step(last, c); q >= 0) {
      if (states_[q].len == states_[last].len + 1) return q;
      return clone_of(last, q, c);
    }
    SamState fresh;
    fresh.len = states_[last].len + 1;
    fresh.doc = doc;
    fresh.rev_end = rev_end;
    states_.push_back(std::move(fresh));
    auto cur = static_cast<std::int32_t>(states_.size() - 1);
    std::int32_t p = last;
    while (p >= 0 && !states_[p].next.contains(c)) {
      states_[p].next[c] = cur;
      p = states_[p].link;
    }
    if (p < 0) {
      states_[cur].link = 0;
    } else {
      std::int32_t q = states_[p].next[c];
      states_[cur].link = states_[p].len + 1 == states_[q].len ? q : clone_of(p, q, c);
    }
    return cur;
  }

  std::vector<SamState> states_;
  std::vector<std::vector<std::int32_t>> prefix_state_;
  std::vector<std::int32_t> order_;
};

}  // namespace

std::span<const Occurrence> CandidateSet::occurrences(CandidateId id) const {
  return class_occurrences_.at(class_key_.at(id));
}

std::optional<CandidateId> CandidateSet::find(const Text& text) const {
  auto it = index_.find(text);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CandidateSet enumerate_candidates(const Corpus& corpus, std::size_t max_len, std::size_t min_count) {
  if (max_len < 1) throw Error(ErrorKind::InvalidParam, "max_len must be >= 1");
  if (min_count < 1) throw Error(ErrorKind::InvalidParam, "min_count must be >= 1");

  ReversedSuffixAutomaton sam(corpus);
  const auto& states = sam.states();

  auto relevant = [&](std::int32_t v) {
    return v > 0 && sam.min_len(v) <= max_len && states[v].count >= min_count;
  };

  // Collect (state, length) pairs and materialize their texts.
  struct Raw {
    std::int32_t state;
    Text text;
  };
  std::vector<Raw> raw;
  for (std::int32_t v : sam.by_length()) {
    if (!relevant(v)) continue;
    const auto& s = states[v];
    const auto& doc = corpus.doc(s.doc).symbols;
    const std::size_t start = doc.size() - 1 - s.rev_end;
    const std::size_t hi = std::min<std::size_t>(s.len, max_len);
    for (std::size_t len = sam.min_len(v); len <= hi; ++len) {
      raw.push_back({v, Text(doc.begin() + start, doc.begin() + start + len)});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    if (a.text.size() != b.text.size()) return a.text.size() < b.text.size();
    return a.text < b.text;
  });

  CandidateSet out;
  out.params_ = {max_len, min_count};

  // Dense class keys in order of first appearance among sorted candidates.
  std::vector<std::int32_t> key_of_state(states.size(), -1);
  std::vector<std::int32_t> state_of_key;
  std::vector<std::vector<CandidateId>> cand_by_state_len(states.size());
  out.texts_.reserve(raw.size());
  out.class_key_.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto v = raw[i].state;
    if (key_of_state[v] < 0) {
      key_of_state[v] = static_cast<std::int32_t>(state_of_key.size());
      state_of_key.push_back(v);
    }
    auto& slots = cand_by_state_len[v];
    const std::size_t offset = raw[i].text.size() - sam.min_len(v);
    if (slots.size() <= offset) slots.resize(offset + 1);
    slots[offset] = static_cast<CandidateId>(i);
    out.class_key_.push_back(static_cast<std::uint32_t>(key_of_state[v]));
    out.texts_.push_back(std::move(raw[i].text));
  }

  // Occurrence lists: every relevant state on the suffix-link path above a
  // position's prefix state receives that position. At most max_len states per position.
  std::vector<std::int32_t> nearest(states.size(), 0);
  for (std::int32_t v : sam.by_length()) {
    if (v == 0) continue;
    nearest[v] = relevant(v) ? v : nearest[states[v].link];
  }
  out.class_occurrences_.resize(state_of_key.size());
  for (const auto& doc : corpus.docs()) {
    const std::size_t n = doc.size();
    for (std::size_t j = 0; j < n; ++j) {
      const auto start = static_cast<std::uint32_t>(n - j);
      for (std::int32_t v = nearest[sam.prefix_state(doc.id, j)]; v > 0; v = states[v].link) {
        out.class_occurrences_[key_of_state[v]].push_back({doc.id, start});
      }
    }
  }
  for (auto& occ : out.class_occurrences_) std::sort(occ.begin(), occ.end());

  // Substring index: walk each candidate right-to-left from every end point;
  // in the reversed automaton this is a forward walk from the root.
  out.substrings_.resize(out.texts_.size());
  for (CandidateId id = 0; id < out.texts_.size(); ++id) {
    const Text& t = out.texts_[id];
    auto& subs = out.substrings_[id];
    for (std::size_t end = t.size(); end >= 1; --end) {
      std::int32_t v = 0;
      for (std::size_t len = 1; len <= end; ++len) {
        v = sam.step(v, t[end - len]);
        if (len == t.size()) break;
        // Substrings of a candidate are at least as frequent and shorter.
        if (!relevant(v)) break;
        const auto& slots = cand_by_state_len[v];
        const std::size_t offset = len - sam.min_len(v);
        if (offset < slots.size()) {
          subs.push_back({slots[offset], static_cast<std::uint32_t>(end - len + 1)});
        }
      }
    }
    std::sort(subs.begin(), subs.end(), [&](const SubstringRef& a, const SubstringRef& b) {
      if (a.start != b.start) return a.start < b.start;
      return out.texts_[a.candidate].size() < out.texts_[b.candidate].size();
    });
  }

  for (CandidateId id = 0; id < out.texts_.size(); ++id) out.index_.emplace(out.texts_[id], id);
  return out;
}

EquivalenceClasses equivalence_classes(const CandidateSet& candidates) {
  EquivalenceClasses out;
  std::map<std::uint32_t, std::size_t> class_index;
  out.class_of.resize(candidates.size());
  for (CandidateId id = 0; id < candidates.size(); ++id) {
    auto [it, inserted] = class_index.try_emplace(candidates.class_key(id), out.classes.size());
    if (inserted) out.classes.emplace_back();
    out.classes[it->second].push_back(id);
    out.class_of[id] = it->second;
  }
  for (const auto& members : out.classes) {
    // Members were appended in candidate order, i.e. by increasing length.
    out.representative.push_back(members.back());
  }
  return out;
}

}  // namespace dracula
