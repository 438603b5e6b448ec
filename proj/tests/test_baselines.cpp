#include "dqest/baselines.hpp"
#include "dqest/hyb.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace dqest;

namespace {

std::vector<WorkerDecisionSet> noisy_workers(const Corpus& c, const std::vector<double>& accuracy, std::uint64_t seed) {
  auto workers = testing_helpers::perfect_workers(c, static_cast<int>(accuracy.size()));
  Rng rng = make_rng(seed, "noise");
  for (std::size_t k = 0; k < workers.size(); ++k) {
    for (auto& r : workers[k].records) {
      if (bernoulli(rng, 1.0 - accuracy[k])) r.decision = 1 - r.decision;
    }
  }
  return workers;
}

}  // namespace

TEST(Baselines, AllFlaggedIsCensusAccuracy) {
  const Corpus c = testing_helpers::easy_corpus(200, 1);
  auto workers = noisy_workers(c, {0.7, 0.9}, 1);
  for (auto& w : workers) {
    for (auto& r : w.records) r.groundTruthKnown = true;
  }
  ClassifierConfig learner;
  learner.treeCount = 5;
  const auto gt = gm_gt_estimate(c, workers, learner);
  const auto all = gm_all_estimate(c, workers, learner);
  for (std::size_t k = 0; k < workers.size(); ++k) {
    const double census = realized_accuracy(c, workers[k]);
    EXPECT_DOUBLE_EQ(gt[k], census);
    EXPECT_DOUBLE_EQ(all[k], census);
    EXPECT_DOUBLE_EQ(ear_estimate(c, workers[k]), census);
  }
}

TEST(Baselines, PerfectWorkersScoreNearOne) {
  const Corpus c = testing_helpers::easy_corpus(600, 2);
  const auto workers = testing_helpers::perfect_workers(c, 3);
  ClassifierConfig learner;
  learner.treeCount = 30;
  for (double q : gm_all_estimate(c, workers, learner)) EXPECT_GT(q, 0.95);
}

TEST(Baselines, GoodReferenceModelTracksAccuracy) {
  const Corpus c = testing_helpers::easy_corpus(2000, 3);
  auto workers = noisy_workers(c, {0.8, 0.8}, 3);
  // Plenty of ground truth gives a near-oracle reference model.
  Rng rng = make_rng(3, "gt");
  for (auto& w : workers) w = sample_ground_truth(w, 300, rng);
  ClassifierConfig learner;
  learner.treeCount = 30;
  for (double q : gm_gt_estimate(c, workers, learner)) EXPECT_NEAR(q, 0.8, 0.05);
}

TEST(Baselines, GroundTruthModelNeedsGroundTruth) {
  const Corpus c = testing_helpers::easy_corpus(40, 4);
  const auto workers = testing_helpers::perfect_workers(c, 2);
  EXPECT_THROW(gm_gt_estimate(c, workers, ClassifierConfig{}), ValidationError);
}

TEST(Baselines, EstimatesInUnitInterval) {
  const Corpus c = testing_helpers::easy_corpus(300, 5);
  auto workers = noisy_workers(c, {0.6, 0.7, 0.8}, 5);
  Rng rng = make_rng(5, "gt");
  for (auto& w : workers) w = sample_ground_truth(w, 5, rng);
  ClassifierConfig learner;
  learner.treeCount = 10;
  for (const auto& estimates : {gm_gt_estimate(c, workers, learner), gm_all_estimate(c, workers, learner)}) {
    for (double q : estimates) {
      EXPECT_GE(q, 0.0);
      EXPECT_LE(q, 1.0);
    }
  }
}
