#include "dqest/hyb.hpp"
#include "dqest/log.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <utility>
#include <string>

namespace dqest {

void validate(const HybConfig& config) {
  if (!(config.d > 0.0)) throw ValidationError("HYB d must be positive");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ValidationError("HYB alpha must lie in (0, 1)");
  if (config.samples < 2 && config.workersPerSample < 2) throw ValidationError("HYB needs at least 2 bootstrap errors");
  if (config.samples < 1 || config.workersPerSample < 1) throw ValidationError("HYB samples and workersPerSample must be >= 1");
  if (!(config.ciAlpha > 0.0 && config.ciAlpha < 1.0)) throw ValidationError("HYB ciAlpha must lie in (0, 1)");
  if (!(config.sampleFraction > 0.0)) throw ValidationError("HYB sampleFraction must be positive");
}

const char* to_string(HybridBranch branch) {
  switch (branch) {
    case HybridBranch::SelectMde: return "select-mde";
    case HybridBranch::SelectEar: return "select-ear";
    case HybridBranch::Blend: return "blend";
  }
  return "?";
}

double ear_estimate(const Corpus& corpus, const WorkerDecisionSet& worker) {
  std::size_t flagged = 0, correct = 0;
  for (const auto& r : worker.records) {
    if (!r.groundTruthKnown) continue;
    const int truth = corpus.labels.at(static_cast<std::size_t>(r.instance));
    check_binary(truth, "ground-truth label");
    ++flagged;
    correct += truth == r.decision ? 1 : 0;
  }
  if (flagged == 0) {
    throw ValidationError("ear_estimate: worker " + std::to_string(worker.id) + " has no ground-truth records");
  }
  return static_cast<double>(correct) / static_cast<double>(flagged);
}

ErrorDistributions generate_error_distributions(const GroundTruthPool& pool,
                                                const std::vector<WorkerDecisionSet>& workers,
                                                const MdeModel& model, std::span<const double> earEstimates,
                                                std::span<const double> mdeEstimates, const HybConfig& config) {
  validate(config);
  if (pool.empty()) throw ValidationError("generate_error_distributions: empty ground-truth pool");
  if (workers.empty() || earEstimates.size() != workers.size() || mdeEstimates.size() != workers.size()) {
    throw ValidationError("generate_error_distributions: need EAR and MDE estimates for every worker");
  }

  ErrorDistributions out;
  std::vector<double> averaged(workers.size());
  for (std::size_t k = 0; k < workers.size(); ++k) averaged[k] = 0.5 * (earEstimates[k] + mdeEstimates[k]);
  if (averaged.size() >= 2) {
    out.accuracyRange = mean_ci(averaged, config.ciAlpha);
  } else {
    out.accuracyRange = {averaged.front(), averaged.front()};
  }
  out.accuracyRange.lower = std::clamp(out.accuracyRange.lower, 0.5, 1.0);
  out.accuracyRange.upper = std::clamp(out.accuracyRange.upper, 0.5, 1.0);

  double meanHistory = 0.0;
  for (const auto& w : workers) meanHistory += static_cast<double>(w.n());
  meanHistory /= static_cast<double>(workers.size());
  out.sampleSize = std::min(static_cast<std::size_t>(std::ceil(config.sampleFraction * meanHistory - 1e-9)), pool.size());
  out.sampleSize = std::max<std::size_t>(out.sampleSize, 1);
  out.gtPerExpert = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::round(static_cast<double>(pool.size()) / static_cast<double>(workers.size()))));
  out.resampledWithReplacement = out.gtPerExpert > out.sampleSize;
  static std::atomic<bool> warned{false};
  if (out.resampledWithReplacement && !warned.exchange(true)) {
    warn("bootstrap subset of " + std::to_string(out.sampleSize) + " instances is smaller than GT per expert (" +
         std::to_string(out.gtPerExpert) + "); EAR draws are taken with replacement");
  }

  for (int r = 0; r < config.samples; ++r) {
    Rng sampleRng = make_rng(config.seed, "hyb-subset", static_cast<std::uint64_t>(r));
    const auto chosen = sample_without_replacement(pool.size(), out.sampleSize, sampleRng);
    for (int p = 0; p < config.workersPerSample; ++p) {
      Rng rng = make_rng(config.seed, "hyb-worker",
                         static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(config.workersPerSample) +
                             static_cast<std::uint64_t>(p));
      const double q = uniform_real(rng, out.accuracyRange.lower, out.accuracyRange.upper);
      const double flipProbability = config.literalFlipProbability ? q : 1.0 - q;

      std::vector<ScoredDecision> decisions;
      decisions.reserve(chosen.size());
      for (auto idx : chosen) {
        const auto& e = pool.entries[idx];
        const int decision = bernoulli(rng, flipProbability) ? 1 - e.label : e.label;
        decisions.push_back({e.instance, decision, e.origin});
      }
      const double qMde = produce_assessment(model.mappings, dq_score(decisions, model.cache));
      out.errMde.push_back(std::fabs(q - qMde));

      // The synthetic EAR sees GT_PE instances of the subset. Flips are
      // independent per instance, so which ones are drawn does not matter.
      const std::size_t draws = out.gtPerExpert;
      std::size_t correct = 0;
      for (std::size_t g = 0; g < draws; ++g) correct += bernoulli(rng, flipProbability) ? 0 : 1;
      const double qEar = static_cast<double>(correct) / static_cast<double>(out.gtPerExpert);
      out.errEar.push_back(std::fabs(q - qEar));
    }
  }
  return out;
}

HybridEstimate decide_and_estimate(std::span<const double> earEstimates, std::span<const double> mdeEstimates,
                                   const ErrorDistributions& errors, const HybConfig& config) {
  if (earEstimates.size() != mdeEstimates.size()) throw ValidationError("decide_and_estimate: estimate lists differ in length");
  HybridEstimate out;
  auto& decision = out.decision;
  decision.pEar = shifted_one_tailed_test(errors.errMde, errors.errEar, config.d).pValue;
  decision.pMde = shifted_one_tailed_test(errors.errEar, errors.errMde, config.d).pValue;
  if (decision.pMde >= config.alpha && decision.pEar >= config.alpha) {
    decision.branch = HybridBranch::Blend;
    const double total = decision.pMde + decision.pEar;
    decision.wMde = (config.swapBlendWeights ? decision.pEar : decision.pMde) / total;
    decision.wEar = 1.0 - decision.wMde;
  } else if (decision.pMde < config.alpha) {
    decision.branch = HybridBranch::SelectMde;
    decision.wMde = 1.0;
    decision.wEar = 0.0;
  } else {
    decision.branch = HybridBranch::SelectEar;
    decision.wMde = 0.0;
    decision.wEar = 1.0;
  }
  out.estimates.resize(earEstimates.size());
  for (std::size_t k = 0; k < earEstimates.size(); ++k) {
    switch (decision.branch) {
      case HybridBranch::SelectMde: out.estimates[k] = mdeEstimates[k]; break;
      case HybridBranch::SelectEar: out.estimates[k] = earEstimates[k]; break;
      case HybridBranch::Blend: out.estimates[k] = decision.wMde * mdeEstimates[k] + decision.wEar * earEstimates[k]; break;
    }
  }
  return out;
}

HybResult mde_hyb(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers, const GroundTruthPool& pool,
                  const MdeModel& model, const HybConfig& hybConfig) {
  HybResult result;
  for (const auto& w : workers) result.ear.push_back(ear_estimate(corpus, w));
  result.mde = assess_workers(model, workers);
  result.errors = generate_error_distributions(pool, workers, model, result.ear, result.mde, hybConfig);
  auto decided = decide_and_estimate(result.ear, result.mde, result.errors, hybConfig);
  result.hyb = std::move(decided.estimates);
  result.decision = decided.decision;
  return result;
}

HybResult mde_hyb(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers, const GroundTruthPool& pool,
                  const MdeConfig& mdeConfig, const ClassifierConfig& classifierConfig, const HybConfig& hybConfig) {
  validate(hybConfig);
  if (workers.size() < 2) throw ValidationError("mde_hyb: the ensemble needs at least 2 workers");
  for (const auto& w : workers) {
    if (w.t() == 0) throw ValidationError("mde_hyb: worker " + std::to_string(w.id) + " has no ground-truth records");
  }
  const MdeModel model = fit_mde(corpus, workers, pool, mdeConfig, classifierConfig);
  return mde_hyb(corpus, workers, pool, model, hybConfig);
}

}  // namespace dqest
