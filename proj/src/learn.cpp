#include "dracula/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "dracula/error.hpp"

namespace dracula {

namespace {

std::size_t count_classes(const LabeledMatrix& data) {
  if (data.labels.size() != data.matrix.rows()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(data.labels.size()) + " labels for " +
                                                  std::to_string(data.matrix.rows()) + " rows");
  }
  if (data.labels.empty()) throw Error(ErrorKind::DegenerateTraining, "no training rows");
  const Label top = *std::max_element(data.labels.begin(), data.labels.end());
  std::vector<bool> seen(top + 1, false);
  for (Label l : data.labels) seen[l] = true;
  if (std::count(seen.begin(), seen.end(), true) < 2) {
    throw Error(ErrorKind::DegenerateTraining, "training needs at least two classes");
  }
  return top + 1;
}

std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

NbModel nb_train(const LabeledMatrix& data, double smoothing) {
  const std::size_t k = count_classes(data);
  const std::size_t d = data.matrix.cols();
  NbModel m;
  m.num_classes = k;
  m.num_features = d;
  m.smoothing = smoothing;
  std::vector<double> docs(k, 0.0);
  std::vector<std::vector<double>> counts(k, std::vector<double>(d, 0.0));
  for (std::size_t r = 0; r < data.matrix.rows(); ++r) {
    const Label l = data.labels[r];
    docs[l] += 1.0;
    for (const auto& [c, v] : data.matrix.row(r)) {
      if (v < 0.0) throw Error(ErrorKind::InvalidParam, "naive Bayes needs nonnegative counts");
      counts[l][c] += v;
    }
  }
  const double n = static_cast<double>(data.matrix.rows());
  m.log_prior.assign(k, -std::numeric_limits<double>::infinity());
  m.log_likelihood.assign(k, std::vector<double>(d, 0.0));
  for (std::size_t c = 0; c < k; ++c) {
    if (docs[c] > 0.0) m.log_prior[c] = std::log(docs[c] / n);
    const double total = std::accumulate(counts[c].begin(), counts[c].end(), 0.0) + smoothing * d;
    for (std::size_t f = 0; f < d; ++f) m.log_likelihood[c][f] = std::log((counts[c][f] + smoothing) / total);
  }
  return m;
}

std::vector<Label> nb_predict(const NbModel& m, const SparseMatrix& rows) {
  if (rows.cols() != m.num_features) throw Error(ErrorKind::DimensionMismatch, "feature count differs");
  std::vector<Label> out;
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    std::vector<double> score = m.log_prior;
    for (std::size_t c = 0; c < m.num_classes; ++c) {
      for (const auto& [f, v] : rows.row(r)) score[c] += v * m.log_likelihood[c][f];
    }
    out.push_back(static_cast<Label>(argmax_lowest(score)));
  }
  return out;
}

CentroidModel centroid_train(const LabeledMatrix& data, bool l1_normalize, bool std_scale) {
  const std::size_t k = count_classes(data);
  const std::size_t d = data.matrix.cols();
  std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
  std::vector<double> n(k, 0.0);
  for (std::size_t r = 0; r < data.matrix.rows(); ++r) {
    const Label l = data.labels[r];
    n[l] += 1.0;
    for (const auto& [c, v] : data.matrix.row(r)) sums[l][c] += v;
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (n[c] == 0.0) throw Error(ErrorKind::DegenerateTraining, "class " + std::to_string(c) + " has no rows");
    for (double& v : sums[c]) v /= n[c];
    if (l1_normalize) {
      const double norm = std::accumulate(sums[c].begin(), sums[c].end(), 0.0,
                                          [](double a, double b) { return a + std::abs(b); });
      if (norm > 0.0) {
        for (double& v : sums[c]) v /= norm;
      }
    }
  }

  CentroidModel m;
  m.num_features = d;
  m.l1_normalize = l1_normalize;
  m.std_scale = std_scale;
  for (std::size_t f = 0; f < d; ++f) {
    double scale = 1.0;
    if (std_scale) {
      double mean = 0.0;
      for (std::size_t c = 0; c < k; ++c) mean += sums[c][f];
      mean /= static_cast<double>(k);
      double var = 0.0;
      for (std::size_t c = 0; c < k; ++c) var += (sums[c][f] - mean) * (sums[c][f] - mean);
      const double sd = std::sqrt(var / static_cast<double>(k));
      if (sd == 0.0) continue;
      scale = 1.0 / sd;
    }
    m.kept.push_back(f);
    m.scale.push_back(scale);
  }
  m.centroids.assign(k, std::vector<double>(m.kept.size(), 0.0));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < m.kept.size(); ++i) m.centroids[c][i] = sums[c][m.kept[i]] * m.scale[i];
  }
  return m;
}

Label centroid_predict(const CentroidModel& m, const SparseMatrix& sample) {
  if (sample.cols() != m.num_features) throw Error(ErrorKind::DimensionMismatch, "feature count differs");
  if (sample.rows() == 0) throw Error(ErrorKind::InvalidParam, "empty sample");
  std::vector<double> mean(m.num_features, 0.0);
  for (std::size_t r = 0; r < sample.rows(); ++r) {
    for (const auto& [c, v] : sample.row(r)) mean[c] += v;
  }
  for (double& v : mean) v /= static_cast<double>(sample.rows());
  if (m.l1_normalize) {
    const double norm =
        std::accumulate(mean.begin(), mean.end(), 0.0, [](double a, double b) { return a + std::abs(b); });
    if (norm > 0.0) {
      for (double& v : mean) v /= norm;
    }
  }
  std::vector<double> neg_dist(m.centroids.size(), 0.0);
  for (std::size_t c = 0; c < m.centroids.size(); ++c) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < m.kept.size(); ++i) {
      const double diff = mean[m.kept[i]] * m.scale[i] - m.centroids[c][i];
      d2 += diff * diff;
    }
    neg_dist[c] = -d2;
  }
  return static_cast<Label>(argmax_lowest(neg_dist));
}

double invariance_check(const SparseMatrix& x, const SparseMatrix& g, const std::vector<double>& beta) {
  if (g.rows() != g.cols() || x.cols() != g.rows() || beta.size() != g.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "X, G and beta dimensions disagree");
  }
  const std::size_t d = g.rows();
  // eta = H beta = sum_n G^n beta, finite because G is nilpotent.
  std::vector<double> eta = beta;
  std::vector<double> cur = beta;
  for (std::size_t step = 0;; ++step) {
    if (step > d) throw Error(ErrorKind::InvalidParam, "dictionary matrix is not nilpotent");
    std::vector<double> next(d, 0.0);
    bool any = false;
    for (std::size_t r = 0; r < d; ++r) {
      for (const auto& [c, v] : g.row(r)) next[r] += v * cur[c];
      any = any || next[r] != 0.0;
    }
    if (!any) break;
    for (std::size_t r = 0; r < d; ++r) eta[r] += next[r];
    cur = std::move(next);
  }
  const SparseMatrix xhat = diffuse(x, g, 1.0);
  double worst = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double a = 0.0, b = 0.0;
    for (const auto& [c, v] : xhat.row(r)) a += v * beta[c];
    for (const auto& [c, v] : x.row(r)) b += v * eta[c];
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

SparseMatrix select_rows(const SparseMatrix& m, const std::vector<std::size_t>& rows) {
  SparseMatrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [c, v] : m.row(rows[i])) out.add(i, c, v);
  }
  return out;
}

SyntheticCorpus synthetic_corpus(std::uint64_t seed, const SyntheticSpec& spec) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution phrase(spec.phrase_rate);
  // Zipf-like weights spread the n-gram counts over a wide range.
  auto zipf = [](std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / static_cast<double>(r + 1);
    return std::discrete_distribution<std::size_t>(w.begin(), w.end());
  };
  auto pick_phrase = zipf(spec.phrases_per_class);
  auto pick_background = zipf(spec.background);
  std::vector<std::vector<std::string>> docs;
  SyntheticCorpus out;
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    for (std::size_t k = 0; k < spec.docs_per_class; ++k) {
      std::vector<std::string> toks;
      while (toks.size() < spec.doc_tokens) {
        if (phrase(rng)) {
          const std::size_t p = pick_phrase(rng);
          for (std::size_t i = 0; i < spec.phrase_len; ++i) {
            toks.push_back("c" + std::to_string(c) + "p" + std::to_string(p) + "w" + std::to_string(i));
          }
        } else {
          toks.push_back("bg" + std::to_string(pick_background(rng)));
        }
      }
      toks.resize(spec.doc_tokens);
      docs.push_back(std::move(toks));
      out.labels.push_back(static_cast<Label>(c));
    }
  }
  // A token seen once would have no unigram candidate under a min count of
  // two; repeat it at the end of its own document.
  std::map<std::string, std::size_t> freq;
  for (const auto& d : docs) {
    for (const auto& t : d) ++freq[t];
  }
  for (auto& d : docs) {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (freq[d[i]] == 1) d.push_back(d[i]);
    }
  }
  for (const auto& d : docs) {
    std::string text;
    for (const auto& t : d) text += (text.empty() ? "" : " ") + t;
    out.texts.push_back(std::move(text));
  }
  return out;
}

EvalResult resample_eval(const LabeledMatrix& data, std::uint64_t seed, std::size_t resamples,
                         std::size_t test_per_class, bool l1_normalize, bool std_scale) {
  const std::size_t k = count_classes(data);
  std::vector<std::vector<std::size_t>> by_class(k);
  for (std::size_t r = 0; r < data.labels.size(); ++r) by_class[data.labels[r]].push_back(r);
  for (const auto& rows : by_class) {
    if (rows.size() <= test_per_class) {
      throw Error(ErrorKind::DegenerateTraining, "every class needs more rows than are held out");
    }
  }
  std::mt19937_64 rng(seed);
  EvalResult out;
  double nb_hits = 0.0, cen_hits = 0.0, base_hits = 0.0, total = 0.0, groups = 0.0;
  for (std::size_t it = 0; it < resamples; ++it) {
    std::vector<std::size_t> train, test;
    for (auto rows : by_class) {
      std::shuffle(rows.begin(), rows.end(), rng);
      test.insert(test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(test_per_class));
      train.insert(train.end(), rows.begin() + static_cast<std::ptrdiff_t>(test_per_class), rows.end());
    }
    LabeledMatrix tr{select_rows(data.matrix, train), {}};
    for (auto r : train) tr.labels.push_back(data.labels[r]);
    const NbModel nb = nb_train(tr);
    const CentroidModel cen = centroid_train(tr, l1_normalize, std_scale);

    std::vector<double> freq(k, 0.0);
    for (Label l : tr.labels) freq[l] += 1.0;
    const auto majority = static_cast<Label>(argmax_lowest(freq));

    const SparseMatrix te = select_rows(data.matrix, test);
    const auto nb_pred = nb_predict(nb, te);
    for (std::size_t i = 0; i < test.size(); ++i) {
      const Label truth = data.labels[test[i]];
      nb_hits += nb_pred[i] == truth ? 1.0 : 0.0;
      base_hits += majority == truth ? 1.0 : 0.0;
      total += 1.0;
    }
    // The held-out rows of one class form one unknown sample.
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<std::size_t> group(test.begin() + static_cast<std::ptrdiff_t>(c * test_per_class),
                                     test.begin() + static_cast<std::ptrdiff_t>((c + 1) * test_per_class));
      cen_hits += centroid_predict(cen, select_rows(data.matrix, group)) == c ? 1.0 : 0.0;
      groups += 1.0;
    }
  }
  out.nb_accuracy = nb_hits / total;
  out.centroid_accuracy = cen_hits / groups;
  out.majority_baseline = base_hits / total;
  return out;
}

}  // namespace dracula
