#include <gtest/gtest.h>

#include <random>

#include "dracula/error.hpp"
#include "dracula/lp.hpp"
#include "oracles.hpp"

using namespace dracula;

namespace {

std::shared_ptr<const ModelInstance> model_of(const std::vector<std::string>& texts, std::size_t k, std::size_t m,
                                              const CostScheme& scheme = {}) {
  auto corpus = std::make_shared<const Corpus>(ingest(texts, Mode::Char));
  auto cand = std::make_shared<const CandidateSet>(enumerate_candidates(*corpus, k, m));
  const auto uni = build_pointers(*corpus, *cand, false);
  return std::make_shared<const ModelInstance>(corpus, cand, uni, scheme_costs(uni, *cand, scheme));
}

std::vector<Text> dict_texts(const Compression& c) {
  std::vector<Text> out;
  for (CandidateId s : c.dictionary) out.push_back(c.model->candidates().text(s));
  return out;
}

}  // namespace

TEST(Relaxation, LayoutCountsRowsAndVariables) {
  const auto model = model_of({"abab", "ba"}, 3, 1);
  const auto lp = build_lp(model, false);
  const auto& l = lp.layout;
  EXPECT_EQ(l.num_t(), model->strings().size());
  EXPECT_EQ(l.w_offset, l.num_t());
  EXPECT_EQ(lp.program.num_vars(), l.num_t() + model->num_pointers());
  EXPECT_EQ(l.doc_coverage_rows, 6u);
  std::size_t dict_rows = 0, string_ptrs = 0;
  for (CandidateId s : model->strings()) dict_rows += model->candidates().length(s);
  for (const auto& p : model->pointers()) string_ptrs += p.uses_string();
  EXPECT_EQ(l.dict_coverage_rows, dict_rows);
  EXPECT_EQ(l.linking_rows, string_ptrs);
  EXPECT_EQ(l.cut_rows, 0u);
  EXPECT_EQ(lp.program.num_rows(), l.doc_coverage_rows + l.dict_coverage_rows + l.linking_rows);
  for (double u : lp.program.upper) EXPECT_EQ(u, 1.0);
}

TEST(Relaxation, XaxabSolvesAndRoundsToAValidCompression) {
  const auto model = model_of({"xaxabxabxacxac"}, 8, 1);
  const auto lp = build_lp(model, false);
  const auto sol = solve_simplex(lp);
  const auto c = round_solution(lp, sol);
  EXPECT_TRUE(validate(c).ok());
  EXPECT_LE(sol.objective, c.objective + 1e-9);
}

TEST(Relaxation, NegativeCostsAreRefused) {
  auto corpus = std::make_shared<const Corpus>(ingest({"abab"}, Mode::Char));
  auto cand = std::make_shared<const CandidateSet>(enumerate_candidates(*corpus, 2, 1));
  const auto uni = build_pointers(*corpus, *cand, false);
  auto model = std::make_shared<const ModelInstance>(corpus, cand, uni, bon_landmark_costs(uni, *cand, 2));
  EXPECT_THROW(solve_simplex(build_lp(model, false)), Error);
  const auto all = take_everything(model);
  EXPECT_EQ(all.dictionary.size(), cand->size());
  EXPECT_EQ(all.doc_pointers.size(), uni.num_document);
}

TEST(Exact, MatchesBruteForce) {
  std::mt19937_64 rng(41);
  int checked = 0;
  while (checked < 40) {
    const auto texts = oracle::random_texts(rng, 1 + rng() % 2, 1, 9, 1 + rng() % 3);
    const std::size_t k = 1 + rng() % 4;
    const CostScheme sc{0.25 * static_cast<double>(rng() % 4), 0.5 * static_cast<double>(1 + rng() % 4),
                        rng() % 2 ? 1.0 : 0.5};
    const auto model = model_of(texts, k, 1, sc);
    if (model->strings().size() > 12) continue;
    const auto exact = exact_solve(model);
    const auto brute = oracle::brute_force(model->corpus(), k, 1, {sc.tau, sc.lambda, sc.alpha});
    EXPECT_NEAR(exact.objective, brute.objective, 1e-9);
    EXPECT_TRUE(validate(exact).ok());
    // Independent recomputation for the dictionary the library picked.
    EXPECT_NEAR(oracle::dictionary_cost(model->corpus(), dict_texts(exact), {sc.tau, sc.lambda, sc.alpha}),
                exact.objective, 1e-9);
    EXPECT_LE(solve_simplex(build_lp(model, false)).objective, exact.objective + 1e-7);
    ++checked;
  }
}

TEST(Exact, RefusesLargeInstances) {
  const auto model = model_of({"abcdefgh"}, 8, 1);
  try {
    exact_solve(model, 12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
  }
}

TEST(Rounding, AlwaysValidAndPolishNeverHurts) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = model_of(oracle::random_texts(rng, 2, 4, 16, 2 + rng() % 2), 5, 1,
                                {0.0, 0.5 + 0.5 * static_cast<double>(rng() % 3), 1.0});
    const auto lp = build_lp(model, false);
    const auto sol = solve_simplex(lp);
    const auto rounded = round_solution(lp, sol);
    ASSERT_TRUE(validate(rounded).ok());
    EXPECT_GE(rounded.objective, sol.objective - 1e-7);
    const auto better = polish(rounded, model->strings());
    ASSERT_TRUE(validate(better).ok());
    EXPECT_LE(better.objective, rounded.objective + 1e-12);
    EXPECT_NEAR(evaluate_objective(*model, better.dictionary, better.doc_pointers, better.dict_pointers),
                better.objective, 1e-9);
  }
}

TEST(Rounding, ReconstructPrunesUnusedStrings) {
  const auto model = model_of({"abab"}, 3, 1, {1.0, 1.0, 1.0});
  const auto& cs = model->candidates();
  std::vector<CandidateId> all(model->strings().begin(), model->strings().end());
  const auto c = reconstruct(model, all);
  EXPECT_TRUE(validate(c).ok());
  EXPECT_LT(c.dictionary.size(), all.size());
  for (CandidateId s : c.dictionary) EXPECT_GE(cs.count(s), 1u);
}

TEST(Validate, CatchesBrokenCompressions) {
  const auto model = model_of({"abab"}, 2, 1);
  auto c = exact_solve(model);
  ASSERT_TRUE(validate(c).ok());
  auto missing = c;
  missing.doc_pointers.pop_back();
  EXPECT_FALSE(validate(missing).ok());
  auto wrong_objective = c;
  wrong_objective.objective += 1.0;
  EXPECT_FALSE(validate(wrong_objective).ok());
  auto no_dict = c;
  no_dict.dictionary.clear();
  EXPECT_FALSE(validate(no_dict).ok());
}

TEST(Cuts, NeverLowerTheRelaxation) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = model_of(oracle::random_texts(rng, 1 + rng() % 2, 3, 14, 2), 5, 1,
                                {0.5 * static_cast<double>(rng() % 3), 1.0, 1.0});
    const double plain = solve_simplex(build_lp(model, false)).objective;
    const auto cut = build_lp(model, true);
    EXPECT_GE(solve_simplex(cut).objective, plain - 1e-7);
  }
}

TEST(Properties, DocumentOrderDoesNotChangeObjectives) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 15; ++trial) {
    auto texts = oracle::random_texts(rng, 3, 3, 10, 2);
    const auto a = model_of(texts, 4, 1);
    std::reverse(texts.begin(), texts.end());
    const auto b = model_of(texts, 4, 1);
    EXPECT_NEAR(solve_simplex(build_lp(a, false)).objective, solve_simplex(build_lp(b, false)).objective, 1e-7);
  }
}

TEST(Properties, RelaxationGrowsWithLambda) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const auto texts = oracle::random_texts(rng, 2, 6, 14, 2);
    double prev = -1.0;
    for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
      const double v = solve_simplex(build_lp(model_of(texts, 4, 1, {0.0, lambda, 1.0}), false)).objective;
      EXPECT_GE(v, prev - 1e-9);
      prev = v;
    }
  }
}

TEST(Fingerprint, EqualForEqualCompressions) {
  const auto model = model_of({"abcabc", "cab"}, 3, 1);
  const auto a = exact_solve(model);
  const auto b = exact_solve(model);
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  auto c = a;
  c.doc_pointers.pop_back();
  EXPECT_NE(fingerprint(a), fingerprint(c));
}
