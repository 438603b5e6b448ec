#pragma once

#include "dqest/core.hpp"
#include "dqest/dq.hpp"
#include "dqest/learners.hpp"
#include "dqest/rng.hpp"

#include <cstdint>
#include <vector>

namespace dqest {

struct MdeConfig {
  int replicates = 10;         ///< C: number of DQ -> accuracy mappings
  int syntheticWorkers = 101;  ///< N: synthetic workers per mapping
  double step = 0.005;         ///< accuracy gap between consecutive synthetic workers
  double qMin = 0.5;
  double qMax = 1.0;
  std::uint64_t seed = 0;
  /// Inference variant: the per-worker ensemble, or one of the global-model ablations.
  BankMode bankMode = BankMode::Ensemble;
};

void validate(const MdeConfig& config);

/// Accuracy of the n-th synthetic worker (0-based): qMax - n * step.
double synthetic_accuracy(const MdeConfig& config, int n);

struct SyntheticWorker {
  std::vector<ScoredDecision> records;
  double targetAccuracy = 1.0;
};

/// Copies the whole pool and inverts exactly round(|pool| * (1 - q)) labels
/// chosen uniformly without replacement.
SyntheticWorker make_synthetic_worker(const GroundTruthPool& pool, double q, Rng& rng);

/// Number of labels make_synthetic_worker flips (round half away from zero).
std::size_t synthetic_flip_count(std::size_t poolSize, double q);

struct MdeModel {
  BaseModelBank bank;
  std::vector<LinearMap> mappings;
  EnsembleCache cache;  ///< covers every worker and pool instance seen by fit_mde
};

/// Synthetic (DQ, q) pairs of one replicate, for inspection and tests.
struct MappingSample {
  std::vector<double> dq;
  std::vector<double> q;
};

/// Fits the MDE model on an already-trained bank.
MdeModel fit_mde(BaseModelBank bank, const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                 const GroundTruthPool& pool, const MdeConfig& config, std::vector<MappingSample>* samples = nullptr);

/// Trains the bank from the workers (ground truth substituted) and fits the mappings.
MdeModel fit_mde(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers, const GroundTruthPool& pool,
                 const MdeConfig& config, const ClassifierConfig& classifierConfig,
                 std::vector<MappingSample>* samples = nullptr);

/// Applies every mapping to `dq`, truncates each result into [0.5, 1], averages.
double produce_assessment(std::span<const LinearMap> mappings, double dq);

/// DQ of the worker's recorded decisions, mapped to an accuracy estimate.
double assess_worker(const MdeModel& model, const WorkerDecisionSet& worker);

/// assess_worker over every worker.
std::vector<double> assess_workers(const MdeModel& model, const std::vector<WorkerDecisionSet>& workers);

}  // namespace dqest
