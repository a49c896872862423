#include "dracula/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "dracula/error.hpp"

namespace dracula {

std::size_t FeatureSpace::string_column(CandidateId s) const {
  if (s >= column_of.size() || column_of[s] < 0) {
    throw Error(ErrorKind::InvalidParam, "string " + std::to_string(s) + " is not a feature");
  }
  return static_cast<std::size_t>(column_of[s]);
}

std::vector<std::string> FeatureSpace::names(const Corpus& corpus, const CandidateSet& candidates) const {
  std::vector<std::string> out;
  out.reserve(size());
  for (CandidateId s : strings) out.push_back(corpus.table().render(candidates.text(s)));
  for (SymbolId c = 0; c < num_symbols; ++c) out.push_back("[" + corpus.table().symbol(c) + "]");
  return out;
}

FeatureSpace feature_space(const ModelInstance& model, std::vector<CandidateId> strings) {
  std::sort(strings.begin(), strings.end());
  strings.erase(std::unique(strings.begin(), strings.end()), strings.end());
  FeatureSpace fs;
  fs.num_symbols = model.corpus().table().size();
  fs.column_of.assign(model.candidates().size(), -1);
  for (std::size_t i = 0; i < strings.size(); ++i) fs.column_of[strings[i]] = static_cast<std::int64_t>(i);
  fs.strings = std::move(strings);
  return fs;
}

FeatureSpace feature_space(const Compression& c) { return feature_space(*c.model, c.dictionary); }

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

std::size_t SparseMatrix::nnz() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

void SparseMatrix::add(std::size_t r, std::size_t c, double v) {
  if (r >= rows_.size() || c >= cols_) throw Error(ErrorKind::DimensionMismatch, "matrix index out of range");
  if (v == 0.0) return;
  auto& row = rows_[r];
  auto [it, fresh] = row.emplace(static_cast<std::uint32_t>(c), v);
  if (!fresh) {
    it->second += v;
    if (it->second == 0.0) row.erase(it);
  }
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = rows_.at(r);
  auto it = row.find(static_cast<std::uint32_t>(c));
  return it == row.end() ? 0.0 : it->second;
}

std::vector<SparseMatrix::Entry> SparseMatrix::triplets() const {
  std::vector<Entry> out;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [c, v] : rows_[r]) out.push_back({static_cast<std::uint32_t>(r), c, v});
  }
  return out;
}

std::vector<std::vector<double>> SparseMatrix::dense() const {
  std::vector<std::vector<double>> d(rows_.size(), std::vector<double>(cols_, 0.0));
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [c, v] : rows_[r]) d[r][c] = v;
  }
  return d;
}

SparseMatrix top_features(const Compression& c, const FeatureSpace& space) {
  const ModelInstance& m = *c.model;
  SparseMatrix x(m.corpus().size(), space.size());
  for (PointerId id : c.doc_pointers) {
    const Pointer& p = m.pointer(id);
    x.add(p.target, space.string_column(p.source), 1.0);
  }
  return x;
}

SparseMatrix top_features(const Compression& c) { return top_features(c, feature_space(c)); }

SparseMatrix dict_matrix(const Compression& c, const FeatureSpace& space) {
  const ModelInstance& m = *c.model;
  SparseMatrix g(space.size(), space.size());
  for (PointerId id : c.dict_pointers) {
    const Pointer& p = m.pointer(id);
    const std::size_t col =
        p.kind == PointerKind::DictChar ? space.symbol_column(p.source) : space.string_column(p.source);
    g.add(space.string_column(p.target), col, 1.0);
  }
  return g;
}

SparseMatrix dict_matrix(const Compression& c) { return dict_matrix(c, feature_space(c)); }

SparseMatrix diffuse(const SparseMatrix& x, const SparseMatrix& g, double rho,
                     const std::vector<double>* row_scale) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw Error(ErrorKind::InvalidParam, "rho must be >= 0");
  if (g.rows() != g.cols() || x.cols() != g.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "X columns must match the square G");
  }
  const std::size_t d = g.rows();
  std::vector<double> scale(d, rho);
  if (row_scale) {
    if (row_scale->size() != d) throw Error(ErrorKind::DimensionMismatch, "row scale length");
    for (std::size_t r = 0; r < d; ++r) {
      if (g.row(r).empty()) continue;
      const double t = (*row_scale)[r];
      if (!(t > 0.0)) throw Error(ErrorKind::InvalidParam, "normalizing weights must be positive");
      scale[r] = rho / t;
    }
  }

  SparseMatrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::map<std::uint32_t, double> cur = x.row(r);
    for (const auto& [c, v] : cur) out.add(r, c, v);
    if (rho == 0.0) continue;
    // G is nilpotent, so the increment vanishes after at most d steps.
    for (std::size_t step = 0; !cur.empty(); ++step) {
      if (step > d) throw Error(ErrorKind::InvalidParam, "dictionary matrix is not nilpotent");
      std::map<std::uint32_t, double> next;
      for (const auto& [k, v] : cur) {
        const double f = v * scale[k];
        for (const auto& [c, gv] : g.row(k)) next[c] += f * gv;
      }
      std::erase_if(next, [](const auto& kv) { return kv.second == 0.0; });
      for (const auto& [c, v] : next) out.add(r, c, v);
      cur = std::move(next);
    }
  }
  return out;
}

FractionalFeatures fractional_features(const LpInstance& lp, const LpSolution& sol, double threshold) {
  const ModelInstance& m = *lp.model;
  FractionalFeatures out;
  out.space = feature_space(m, lp_support(lp, sol, threshold));
  const auto& fs = out.space;
  out.x = SparseMatrix(m.corpus().size(), fs.size());
  out.g = SparseMatrix(fs.size(), fs.size());
  out.t.assign(fs.size(), 1.0);
  for (std::size_t i = 0; i < fs.strings.size(); ++i) out.t[i] = t_value(lp, sol, fs.strings[i]);
  for (PointerId id = 0; id < m.num_pointers(); ++id) {
    const double w = w_value(lp, sol, id);
    if (w <= threshold) continue;
    const Pointer& p = m.pointer(id);
    if (p.is_document()) {
      out.x.add(p.target, fs.string_column(p.source), w);
    } else if (fs.column_of[p.target] >= 0) {
      const std::size_t col =
          p.kind == PointerKind::DictChar ? fs.symbol_column(p.source) : fs.string_column(p.source);
      out.g.add(fs.string_column(p.target), col, w);
    }
  }
  return out;
}

std::string_view edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::CharToDict: return "char-dict";
    case EdgeKind::DictToDict: return "dict-dict";
    case EdgeKind::DictToDoc: return "dict-doc";
  }
  return "unknown";
}

std::string DagView::node_name(std::size_t node, const Corpus& corpus, const CandidateSet& candidates) const {
  const Node& n = nodes.at(node);
  switch (n.kind) {
    case NodeKind::Symbol: return "[" + corpus.table().symbol(n.index) + "]";
    case NodeKind::String: return corpus.table().render(candidates.text(n.index));
    case NodeKind::Document: return "doc" + std::to_string(n.index);
  }
  return {};
}

DagView dag_export(const Compression& c) {
  const ModelInstance& m = *c.model;
  const std::size_t nsym = m.corpus().table().size();
  DagView dag;
  std::vector<std::size_t> node_of(m.candidates().size(), 0);
  for (SymbolId s = 0; s < nsym; ++s) dag.nodes.push_back({DagView::NodeKind::Symbol, s, 0});
  for (CandidateId s : c.dictionary) {
    node_of[s] = dag.nodes.size();
    dag.nodes.push_back({DagView::NodeKind::String, s, 0});
  }
  const std::size_t first_doc = dag.nodes.size();
  for (DocId k = 0; k < m.corpus().size(); ++k) dag.nodes.push_back({DagView::NodeKind::Document, k, 0});

  std::vector<std::vector<CandidateId>> uses(m.candidates().size());
  for (PointerId id : c.dict_pointers) {
    const Pointer& p = m.pointer(id);
    if (p.kind == PointerKind::DictChar) {
      dag.edges.push_back({EdgeKind::CharToDict, p.source, node_of[p.target], p.location});
    } else {
      dag.edges.push_back({EdgeKind::DictToDict, node_of[p.source], node_of[p.target], p.location});
      uses[p.target].push_back(p.source);
    }
  }
  for (PointerId id : c.doc_pointers) {
    const Pointer& p = m.pointer(id);
    dag.edges.push_back({EdgeKind::DictToDoc, node_of[p.source], first_doc + p.target, p.location});
  }

  // String sources are strictly shorter than their targets, so visiting the
  // dictionary by length settles every layer before it is needed.
  std::vector<CandidateId> order = c.dictionary;
  std::stable_sort(order.begin(), order.end(), [&](CandidateId a, CandidateId b) {
    return m.candidates().length(a) < m.candidates().length(b);
  });
  for (CandidateId s : order) {
    std::size_t layer = 1;
    for (CandidateId u : uses[s]) layer = std::max(layer, dag.nodes[node_of[u]].layer + 1);
    dag.nodes[node_of[s]].layer = layer;
    dag.depth = std::max(dag.depth, layer);
  }
  for (std::size_t i = first_doc; i < dag.nodes.size(); ++i) dag.nodes[i].layer = dag.depth + 1;
  return dag;
}

CompressionStats stats(const Compression& c) {
  CompressionStats st;
  st.pointer_count = c.doc_pointers.size() + c.dict_pointers.size();
  st.dict_size = c.dictionary.size();
  double total = 0.0;
  for (PointerId id : c.doc_pointers) total += c.model->pointer(id).length;
  st.mnl = c.doc_pointers.empty() ? 0.0 : total / static_cast<double>(c.doc_pointers.size());
  st.depth = dag_export(c).depth;
  return st;
}

namespace {

void write_header(std::ostream& os, const std::vector<std::string>& header) {
  for (const auto& line : header) os << "# " << line << '\n';
}

}  // namespace

void write_matrix(std::ostream& os, const SparseMatrix& m, const std::vector<std::string>& header) {
  write_header(os, header);
  os << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  std::ostringstream buf;
  buf.precision(17);
  for (const auto& e : m.triplets()) buf << e.row << ' ' << e.col << ' ' << e.value << '\n';
  os << buf.str();
}

SparseMatrix read_matrix(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw Error(ErrorKind::ParseError, "matrix file has no size line");
  std::istringstream head(line);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(head >> rows >> cols >> nnz)) throw Error(ErrorKind::ParseError, "bad matrix size line: " + line);
  SparseMatrix m(rows, cols);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_line()) throw Error(ErrorKind::ParseError, "matrix file ends early");
    std::istringstream ls(line);
    std::size_t r = 0, c = 0;
    double v = 0.0;
    if (!(ls >> r >> c >> v) || r >= rows || c >= cols || v < 0.0) {
      throw Error(ErrorKind::ParseError, "bad matrix entry: " + line);
    }
    if (m.at(r, c) != 0.0) throw Error(ErrorKind::ParseError, "duplicate matrix entry: " + line);
    m.add(r, c, v);
  }
  return m;
}

void write_names(std::ostream& os, const std::vector<std::string>& names, const std::vector<std::string>& header) {
  write_header(os, header);
  for (const auto& n : names) os << n << '\n';
}

void write_dag(std::ostream& os, const DagView& dag, const Corpus& corpus, const CandidateSet& candidates,
               const std::vector<std::string>& header) {
  write_header(os, header);
  auto id = [&](std::size_t node) {
    const auto& n = dag.nodes[node];
    switch (n.kind) {
      case DagView::NodeKind::Symbol: return "c" + std::to_string(n.index);
      case DagView::NodeKind::String: return "s" + std::to_string(n.index);
      case DagView::NodeKind::Document: return "d" + std::to_string(n.index);
    }
    return std::string{};
  };
  os << "edges " << dag.edges.size() << '\n';
  for (const auto& e : dag.edges) {
    os << edge_kind_name(e.kind) << ' ' << id(e.source) << ' ' << id(e.target) << ' ' << e.location << '\n';
  }
  os << "layers " << dag.nodes.size() << '\n';
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    os << "layer " << id(i) << ' ' << dag.nodes[i].layer << ' ' << dag.node_name(i, corpus, candidates) << '\n';
  }
}

}  // namespace dracula
