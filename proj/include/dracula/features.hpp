#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dracula/lp.hpp"

namespace dracula {

/// Dictionary strings (candidate-id order) followed by every symbol of the
/// alphabet. Symbol features are written [c].
struct FeatureSpace {
  std::vector<CandidateId> strings;
  std::size_t num_symbols = 0;
  std::vector<std::int64_t> column_of;  // candidate -> column, -1 when absent

  std::size_t size() const noexcept { return strings.size() + num_symbols; }
  std::size_t string_column(CandidateId s) const;
  std::size_t symbol_column(SymbolId c) const noexcept { return strings.size() + c; }
  bool is_symbol_column(std::size_t col) const noexcept { return col >= strings.size(); }
  std::vector<std::string> names(const Corpus& corpus, const CandidateSet& candidates) const;
};

FeatureSpace feature_space(const ModelInstance& model, std::vector<CandidateId> strings);
FeatureSpace feature_space(const Compression& compression);

/// Row-major sparse matrix with nonnegative entries and no duplicate cells.
class SparseMatrix {
 public:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept;

  /// Accumulates into (r, c); entries that reach zero are removed.
  void add(std::size_t r, std::size_t c, double v);
  double at(std::size_t r, std::size_t c) const;
  const std::map<std::uint32_t, double>& row(std::size_t r) const { return rows_.at(r); }
  std::vector<Entry> triplets() const;
  std::vector<std::vector<double>> dense() const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::vector<std::map<std::uint32_t, double>> rows_;
  std::size_t cols_ = 0;
};

/// X: per document, the number of document pointers using each string.
SparseMatrix top_features(const Compression& compression, const FeatureSpace& space);
SparseMatrix top_features(const Compression& compression);

/// G: per dictionary string, the sources of its reconstruction (string
/// pointers count the string, character pointers the symbol). Symbol rows are
/// zero.
SparseMatrix dict_matrix(const Compression& compression, const FeatureSpace& space);
SparseMatrix dict_matrix(const Compression& compression);

/// X-hat = X (I + sum_{n>=1} (rho G')^n), where G' is G with row s divided by
/// t_s when `row_scale` is given (indexed by feature column; only string rows
/// are read). The series is accumulated until the increment is zero.
SparseMatrix diffuse(const SparseMatrix& x, const SparseMatrix& g, double rho,
                     const std::vector<double>* row_scale = nullptr);

/// Real-valued X and G read from an LP solution: pointer weights w replace
/// counts and the space holds every string with t above the threshold.
struct FractionalFeatures {
  FeatureSpace space;
  SparseMatrix x;
  SparseMatrix g;
  std::vector<double> t;  // per feature column (1 for symbols)
};
FractionalFeatures fractional_features(const LpInstance& lp, const LpSolution& sol,
                                       double threshold = kRoundThreshold);

enum class EdgeKind : std::uint8_t { CharToDict, DictToDict, DictToDoc };
std::string_view edge_kind_name(EdgeKind kind);

/// Nodes are symbols, dictionary strings and documents.
struct DagView {
  enum class NodeKind : std::uint8_t { Symbol, String, Document };
  struct Node {
    NodeKind kind;
    std::uint32_t index;  // symbol id, candidate id or document id
    std::size_t layer;
  };
  struct Edge {
    EdgeKind kind;
    std::size_t source;  // node index
    std::size_t target;  // node index
    std::uint32_t location;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::size_t depth = 0;  // max layer of any dictionary string

  std::string node_name(std::size_t node, const Corpus& corpus, const CandidateSet& candidates) const;
};

/// Layer 0 holds the symbols; a string sits one layer above the deepest string
/// its reconstruction uses; documents sit above every string.
DagView dag_export(const Compression& compression);

struct CompressionStats {
  std::size_t pointer_count = 0;
  double mnl = 0.0;  // mean source length over document pointers
  std::size_t dict_size = 0;
  std::size_t depth = 0;
};

CompressionStats stats(const Compression& compression);

/// Plain-text formats. `header` lines are written first, each prefixed "# ".
void write_matrix(std::ostream& os, const SparseMatrix& m, const std::vector<std::string>& header);
SparseMatrix read_matrix(std::istream& is);
void write_names(std::ostream& os, const std::vector<std::string>& names,
                 const std::vector<std::string>& header);
void write_dag(std::ostream& os, const DagView& dag, const Corpus& corpus, const CandidateSet& candidates,
               const std::vector<std::string>& header);

}  // namespace dracula
