#include <gtest/gtest.h>

#include <cmath>

#include "dracula/error.hpp"
#include "dracula/learn.hpp"

using namespace dracula;

namespace {

SparseMatrix from_dense(const std::vector<std::vector<double>>& rows) {
  SparseMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.add(r, c, rows[r][c]);
  }
  return m;
}

}  // namespace

TEST(NaiveBayes, HandComputedLikelihoods) {
  const LabeledMatrix data{from_dense({{2, 0}, {1, 1}, {0, 3}}), {0, 0, 1}};
  const auto nb = nb_train(data);
  // Class 0 counts (3, 1) + 1 each over 6; class 1 counts (0, 3) + 1 each over 5.
  EXPECT_NEAR(nb.log_likelihood[0][0], std::log(4.0 / 6.0), 1e-12);
  EXPECT_NEAR(nb.log_likelihood[1][1], std::log(4.0 / 5.0), 1e-12);
  EXPECT_NEAR(nb.log_prior[0], std::log(2.0 / 3.0), 1e-12);
  EXPECT_EQ(nb_predict(nb, from_dense({{5, 0}, {0, 5}})), (std::vector<Label>{0, 1}));
}

TEST(NaiveBayes, TiesGoToLowestClass) {
  const LabeledMatrix data{from_dense({{1, 0}, {0, 1}}), {1, 0}};
  const auto nb = nb_train(data);
  EXPECT_EQ(nb_predict(nb, from_dense({{1, 1}})).front(), 0u);
}

TEST(NaiveBayes, DegenerateTraining) {
  EXPECT_THROW(nb_train({from_dense({{1, 0}}), {0}}), Error);
  EXPECT_THROW(nb_train({from_dense({{1, 0}, {0, 1}}), {0}}), Error);
}

TEST(Centroid, NearestCentroidWithScaling) {
  const LabeledMatrix data{from_dense({{4, 0, 1}, {3, 1, 1}, {0, 4, 1}, {1, 3, 1}}), {0, 0, 1, 1}};
  for (bool l1 : {false, true}) {
    for (bool sd : {false, true}) {
      const auto m = centroid_train(data, l1, sd);
      EXPECT_EQ(centroid_predict(m, from_dense({{5, 0, 1}})), 0u);
      EXPECT_EQ(centroid_predict(m, from_dense({{0, 2, 1}, {1, 5, 1}})), 1u);
      // The constant third column has zero spread across centroids.
      if (sd) EXPECT_EQ(m.kept.size(), 2u);
    }
  }
}

TEST(Synthetic, SeededAndBalanced) {
  const auto a = synthetic_corpus(3);
  const auto b = synthetic_corpus(3);
  EXPECT_EQ(a.texts, b.texts);
  EXPECT_NE(a.texts, synthetic_corpus(4).texts);
  std::vector<int> per(3, 0);
  for (Label l : a.labels) ++per[l];
  EXPECT_EQ(per, (std::vector<int>{6, 6, 6}));
}

TEST(Resample, SeparableDataScoresPerfectly) {
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  for (Label c = 0; c < 3; ++c) {
    for (int i = 0; i < 5; ++i) {
      std::vector<double> r(3, 0.0);
      r[c] = 3.0 + i;
      rows.push_back(r);
      labels.push_back(c);
    }
  }
  const auto e = resample_eval({from_dense(rows), labels}, 1, 20, 1);
  EXPECT_EQ(e.nb_accuracy, 1.0);
  EXPECT_EQ(e.centroid_accuracy, 1.0);
  EXPECT_NEAR(e.majority_baseline, 1.0 / 3.0, 1e-12);
  EXPECT_THROW(resample_eval({from_dense(rows), labels}, 1, 5, 5), Error);
}

TEST(Rows, SelectKeepsOrder) {
  const auto m = from_dense({{1, 0}, {0, 2}, {3, 0}});
  const auto s = select_rows(m, {2, 0});
  EXPECT_EQ(s.at(0, 0), 3.0);
  EXPECT_EQ(s.at(1, 0), 1.0);
}

TEST(NaiveBayes, ZeroRowFollowsThePrior) {
  const LabeledMatrix data{from_dense({{3, 0}, {0, 3}, {0, 2}}), {0, 1, 1}};
  const auto nb = nb_train(data);
  EXPECT_EQ(nb_predict(nb, from_dense({{0, 0}})).front(), 1u);
}

TEST(NaiveBayes, ScalingATestRowKeepsTheLabelUnderUniformPriors) {
  const LabeledMatrix data{from_dense({{3, 1, 0}, {0, 2, 2}, {1, 0, 4}}), {0, 1, 2}};
  const auto nb = nb_train(data);
  for (const auto& row : std::vector<std::vector<double>>{{1, 0, 0}, {0, 1, 1}, {1, 1, 2}, {2, 1, 0}}) {
    const Label base = nb_predict(nb, from_dense({row})).front();
    for (double k : {2.0, 3.0, 7.0}) {
      std::vector<double> scaled = row;
      for (double& v : scaled) v *= k;
      EXPECT_EQ(nb_predict(nb, from_dense({scaled})).front(), base);
    }
  }
}

TEST(Centroid, EquidistantSampleGoesToLowestClass) {
  const LabeledMatrix data{from_dense({{1, 0}, {0, 1}}), {0, 1}};
  const auto m = centroid_train(data, false, false);
  EXPECT_EQ(centroid_predict(m, from_dense({{1, 1}})), 0u);
  EXPECT_THROW(centroid_predict(m, from_dense({{1, 1, 1}})), Error);
}

TEST(Labels, CountMustMatchRows) {
  try {
    nb_train({from_dense({{1, 0}, {0, 1}}), {0, 1, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}
