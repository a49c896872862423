#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dracula/features.hpp"

namespace dracula {

using Label = std::uint32_t;

struct LabeledMatrix {
  SparseMatrix matrix;
  std::vector<Label> labels;  // one per row
};

/// Multinomial naive Bayes with add-one smoothing, scored in log space.
struct NbModel {
  std::size_t num_classes = 0;
  std::size_t num_features = 0;
  double smoothing = 1.0;
  std::vector<double> log_prior;                 // per class
  std::vector<std::vector<double>> log_likelihood;  // class x feature
};

NbModel nb_train(const LabeledMatrix& data, double smoothing = 1.0);
/// Ties go to the lowest class id.
std::vector<Label> nb_predict(const NbModel& model, const SparseMatrix& rows);

struct CentroidModel {
  std::size_t num_features = 0;
  bool l1_normalize = false;
  bool std_scale = false;
  std::vector<std::size_t> kept;              // feature columns in use
  std::vector<double> scale;                  // per kept column
  std::vector<std::vector<double>> centroids;  // class x kept column
};

/// Centroids are class means, optionally l1-normalized; with std_scale every
/// feature is divided by its standard deviation across the centroids
/// (features with zero deviation are dropped). Statistics are frozen here.
CentroidModel centroid_train(const LabeledMatrix& data, bool l1_normalize, bool std_scale);
/// Nearest centroid (Euclidean) to the mean of `sample` rows, transformed like
/// the centroids. Ties go to the lowest class id.
Label centroid_predict(const CentroidModel& model, const SparseMatrix& sample);

/// max |X-hat beta - X eta| with eta = H beta and H = (I - G)^{-1}.
double invariance_check(const SparseMatrix& x, const SparseMatrix& g, const std::vector<double>& beta);

/// Rows r of `m` in the given order.
SparseMatrix select_rows(const SparseMatrix& m, const std::vector<std::size_t>& rows);

struct SyntheticCorpus {
  std::vector<std::string> texts;  // token mode
  std::vector<Label> labels;
};

struct SyntheticSpec {
  std::size_t num_classes = 3;
  std::size_t docs_per_class = 6;
  std::size_t doc_tokens = 12;
  std::size_t phrases_per_class = 2;
  std::size_t phrase_len = 3;
  std::size_t background = 12;  // shared vocabulary size
  double phrase_rate = 0.5;     // chance that the next insertion is a phrase
};

/// Seeded token-mode corpus; each class has its own planted phrases mixed
/// into a shared background vocabulary.
SyntheticCorpus synthetic_corpus(std::uint64_t seed, const SyntheticSpec& spec = {});

struct EvalResult {
  double nb_accuracy = 0.0;
  double centroid_accuracy = 0.0;
  double majority_baseline = 0.0;
};

/// Mean accuracy over `resamples` random splits, holding out `test_per_class`
/// rows of every class each time. Naive Bayes labels every held-out row; the
/// centroid classifier labels each class's held-out rows as one sample.
EvalResult resample_eval(const LabeledMatrix& data, std::uint64_t seed, std::size_t resamples,
                         std::size_t test_per_class, bool l1_normalize = true, bool std_scale = true);

}  // namespace dracula
