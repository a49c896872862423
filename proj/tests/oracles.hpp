#pragma once
// Independent reference implementations used by the unit tests and the
// acceptance binary. Nothing here calls into the library's solvers.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dracula/corpus.hpp"
#include "dracula/recon.hpp"

namespace oracle {

using dracula::Text;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Random char-mode texts over the first `alphabet` letters.
inline std::vector<std::string> random_texts(std::mt19937_64& rng, std::size_t docs, std::size_t min_len,
                                             std::size_t max_len, std::size_t alphabet) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> sym(0, static_cast<int>(alphabet) - 1);
  std::vector<std::string> out;
  for (std::size_t d = 0; d < docs; ++d) {
    std::string s;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + sym(rng)));
    out.push_back(s);
  }
  return out;
}

// Every substring of length <= k with its (doc, 1-based start) occurrences.
inline std::map<Text, std::vector<std::pair<std::uint32_t, std::uint32_t>>> all_ngrams(
    const dracula::Corpus& corpus, std::size_t k) {
  std::map<Text, std::vector<std::pair<std::uint32_t, std::uint32_t>>> out;
  for (const auto& doc : corpus.docs()) {
    const auto& s = doc.symbols;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t l = 1; l <= k && i + l <= s.size(); ++l) {
        out[Text(s.begin() + i, s.begin() + i + l)].push_back({doc.id, static_cast<std::uint32_t>(i + 1)});
      }
    }
  }
  return out;
}

inline std::map<Text, std::vector<std::pair<std::uint32_t, std::uint32_t>>> frequent_ngrams(
    const dracula::Corpus& corpus, std::size_t k, std::size_t m) {
  auto all = all_ngrams(corpus, k);
  for (auto it = all.begin(); it != all.end();) {
    it = it->second.size() < m ? all.erase(it) : std::next(it);
  }
  return all;
}

// Members of the same follower class share their start-position sets.
inline std::size_t follower_class_count(const dracula::Corpus& corpus, std::size_t k, std::size_t m) {
  std::set<std::vector<std::pair<std::uint32_t, std::uint32_t>>> keys;
  for (auto& [text, occ] : frequent_ngrams(corpus, k, m)) keys.insert(occ);
  return keys.size();
}

// Minimum-cost cover of positions 1..n by intervals [a, b] (cost c), computed
// forward over "covered prefix length" states.
struct Span {
  std::size_t a, b;
  double c;
};

inline double min_cover(std::size_t n, const std::vector<Span>& spans) {
  std::vector<double> best(n + 1, kInf);
  best[0] = 0.0;
  for (std::size_t covered = 0; covered < n; ++covered) {
    if (best[covered] == kInf) continue;
    for (const auto& s : spans) {
      if (s.a <= covered + 1 && s.b > covered) best[s.b] = std::min(best[s.b], best[covered] + s.c);
    }
  }
  return best[n];
}

// Same as above, as a shortest path: forward arcs per interval, free backward
// arcs between neighbouring gaps. Bellman-Ford since arcs go both ways.
inline double cover_by_shortest_path(const dracula::ReconInstance& inst) {
  const std::size_t n = inst.length();
  std::vector<double> dist(n + 1, kInf);
  dist[0] = 0.0;
  for (std::size_t round = 0; round <= n + 1; ++round) {
    bool changed = false;
    for (const auto& iv : inst.intervals) {
      const std::size_t from = iv.start - 1, to = iv.end();
      if (dist[from] + iv.cost < dist[to]) { dist[to] = dist[from] + iv.cost; changed = true; }
    }
    for (std::size_t j = n; j > 0; --j) {
      if (dist[j] < dist[j - 1]) { dist[j - 1] = dist[j]; changed = true; }
    }
    if (!changed) break;
  }
  return dist[n] * inst.demand;
}

struct Scheme {
  double tau = 0.0, lambda = 1.0, alpha = 1.0;
};

struct Optimum {
  double objective = kInf;
  std::vector<Text> dictionary;
};

inline bool occurs_at(const Text& hay, std::size_t pos, const Text& needle) {
  return pos + needle.size() <= hay.size() && std::equal(needle.begin(), needle.end(), hay.begin() + pos);
}

// Dictionary cost for a fixed set: tau per string plus the cheapest
// reconstruction of every string (characters at alpha*lambda, proper
// sub-strings of length >= 2 at lambda) and of every document (one per
// dictionary occurrence).
inline double dictionary_cost(const dracula::Corpus& corpus, const std::vector<Text>& dict, const Scheme& sc) {
  double total = 0.0;
  for (const Text& s : dict) {
    std::vector<Span> spans;
    for (std::size_t i = 0; i < s.size(); ++i) spans.push_back({i + 1, i + 1, sc.alpha * sc.lambda});
    for (const Text& u : dict) {
      if (u.size() < 2 || u.size() >= s.size()) continue;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (occurs_at(s, i, u)) spans.push_back({i + 1, i + u.size(), sc.lambda});
      }
    }
    total += sc.tau + min_cover(s.size(), spans);
  }
  for (const auto& doc : corpus.docs()) {
    std::vector<Span> spans;
    for (const Text& u : dict) {
      for (std::size_t i = 0; i < doc.symbols.size(); ++i) {
        if (occurs_at(doc.symbols, i, u)) spans.push_back({i + 1, i + u.size(), 1.0});
      }
    }
    total += min_cover(doc.symbols.size(), spans);
  }
  return total;
}

// Brute force over all subsets of the frequent n-grams.
inline Optimum brute_force(const dracula::Corpus& corpus, std::size_t k, std::size_t m, const Scheme& sc) {
  std::vector<Text> universe;
  for (auto& [text, occ] : frequent_ngrams(corpus, k, m)) universe.push_back(text);
  Optimum best;
  const std::size_t n = universe.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Text> dict;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) dict.push_back(universe[i]);
    }
    const double v = dictionary_cost(corpus, dict, sc);
    if (v < best.objective - 1e-12) best = {v, dict};
  }
  return best;
}

}  // namespace oracle
