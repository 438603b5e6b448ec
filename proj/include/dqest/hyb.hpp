#pragma once

#include "dqest/core.hpp"
#include "dqest/learners.hpp"
#include "dqest/mde.hpp"
#include "dqest/stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dqest {

struct HybConfig {
  double d = 0.01;        ///< meaningful difference between mean errors
  double alpha = 0.02;    ///< significance level of both one-tailed tests
  int samples = 10;       ///< R: ground-truth subsets drawn for the bootstrap
  int workersPerSample = 10;  ///< P: synthetic workers per subset
  double ciAlpha = 0.01;  ///< the accuracy range is the (1 - ciAlpha) CI of the averaged estimates
  double sampleFraction = 0.2;  ///< subset size as a fraction of the mean worker history
  /// Flip each bootstrap label with probability q instead of 1 - q.
  bool literalFlipProbability = false;
  /// Blend with MDE weighted by pEar and EAR by pMde (the reverse of the
  /// default weighting).
  bool swapBlendWeights = false;
  std::uint64_t seed = 0;
};

void validate(const HybConfig& config);

/// Fraction of the worker's ground-truth records decided correctly.
double ear_estimate(const Corpus& corpus, const WorkerDecisionSet& worker);

struct ErrorDistributions {
  std::vector<double> errMde;
  std::vector<double> errEar;
  Interval accuracyRange;       ///< range the synthetic accuracies were drawn from
  std::size_t sampleSize = 0;   ///< t: instances per bootstrap subset
  std::size_t gtPerExpert = 0;  ///< GT_PE: ground truth seen by each synthetic EAR
  bool resampledWithReplacement = false;
};

/// Bootstrap of MDE's and EAR's absolute errors on synthetic workers whose
/// accuracies are drawn from the confidence interval of the real workers'
/// averaged (EAR + MDE) / 2 estimates, clipped to [0.5, 1].
ErrorDistributions generate_error_distributions(const GroundTruthPool& pool,
                                                const std::vector<WorkerDecisionSet>& workers,
                                                const MdeModel& model, std::span<const double> earEstimates,
                                                std::span<const double> mdeEstimates, const HybConfig& config);

enum class HybridBranch { SelectMde, SelectEar, Blend };

const char* to_string(HybridBranch branch);

struct HybridDecision {
  HybridBranch branch = HybridBranch::Blend;
  double pMde = 1.0;  ///< p-value of H0: mean(errEar) - mean(errMde) <= d
  double pEar = 1.0;  ///< p-value of H0: mean(errMde) - mean(errEar) <= d
  double wMde = 0.5;
  double wEar = 0.5;
};

struct HybridEstimate {
  std::vector<double> estimates;
  HybridDecision decision;
};

/// Selects MDE (pMde < alpha), EAR (pEar < alpha) or blends both with
/// weights pMde / (pMde + pEar) and pEar / (pMde + pEar).
HybridEstimate decide_and_estimate(std::span<const double> earEstimates, std::span<const double> mdeEstimates,
                                   const ErrorDistributions& errors, const HybConfig& config);

struct HybResult {
  std::vector<double> ear;
  std::vector<double> mde;
  std::vector<double> hyb;
  HybridDecision decision;
  ErrorDistributions errors;
};

/// MDE-HYB on a fitted MDE model.
HybResult mde_hyb(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers, const GroundTruthPool& pool,
                  const MdeModel& model, const HybConfig& hybConfig);

/// Full pipeline: fit MDE, compute EAR, bootstrap, select or blend.
HybResult mde_hyb(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers, const GroundTruthPool& pool,
                  const MdeConfig& mdeConfig, const ClassifierConfig& classifierConfig, const HybConfig& hybConfig);

}  // namespace dqest
