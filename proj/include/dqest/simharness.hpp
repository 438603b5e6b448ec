#pragma once

#include "dqest/core.hpp"
#include "dqest/hyb.hpp"
#include "dqest/learners.hpp"
#include "dqest/mde.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dqest {

struct WorkerProfile {
  std::string name;
  std::vector<double> accuracies;  ///< g_k, one per simulated worker
};

/// 20 workers at 0.61, 0.62, ..., 0.80.
WorkerProfile low_quality_profile();
/// 20 workers at 0.76, 0.77, ..., 0.95.
WorkerProfile high_quality_profile();
/// `count` accuracies evenly spaced over [lo, hi].
WorkerProfile even_profile(std::string name, int count, double lo, double hi);

void validate(const WorkerProfile& profile);

/// Partitions the corpus (or `instances`, when given) into K equal shares
/// and flips each true label independently with probability 1 - g_k.
std::vector<WorkerDecisionSet> simulate_cohort(const Corpus& corpus, const WorkerProfile& profile, Rng& rng,
                                               const std::vector<Index>* instances = nullptr);

struct CorrelatedErrors {
  Index featureIndex = -1;  ///< -1 picks the highest-variance feature
  double percentile = 0.9;
  double extraError = 0.2;
};

struct RegionRates {
  double hard = 0.0;
  double easy = 0.0;
  double residual = 0.0;  ///< overall error lost to clipping
};

/// Error rates in the hard (fraction f) and easy regions such that the
/// overall rate stays 1 - g. Throws ConfigError when clipping would move the
/// overall rate by more than 0.01.
RegionRates region_error_rates(double g, double hardFraction, double extraError);

std::vector<WorkerDecisionSet> simulate_correlated(const Corpus& corpus, const WorkerProfile& profile,
                                                   const CorrelatedErrors& correlated, Rng& rng,
                                                   const std::vector<Index>* instances = nullptr);

enum class Method { Ear, Mde, MdeHyb, GmGt, GmAll, MdeExc, MdeGmAll, MdeSmGt };

const char* to_string(Method method);
Method parse_method(const std::string& name);  ///< throws ConfigError on unknown names
std::vector<Method> all_methods();

/// What the estimates are scored against.
enum class TruthDefinition {
  Generative,  ///< the profile accuracy g_k
  Realized,    ///< the worker's realized fraction of correct decisions
};

struct ExperimentConfig {
  std::string corpusTag = "spam";
  WorkerProfile profile = low_quality_profile();
  std::vector<int> budgets{5, 10, 15, 20, 25, 30, 50, 100};
  int repetitions = 50;
  std::optional<CorrelatedErrors> correlated;
  ClassifierConfig learner;
  MdeConfig mde;
  HybConfig hyb;
  std::vector<Method> methods{Method::Ear, Method::Mde, Method::MdeHyb, Method::GmGt, Method::GmAll};
  Method reference = Method::MdeHyb;
  TruthDefinition truth = TruthDefinition::Generative;
  std::uint64_t masterSeed = 1;
  int jobs = 1;
};

void validate(const ExperimentConfig& config);

struct CellResult {
  Method method = Method::Ear;
  int budget = 0;
  std::vector<double> mae;  ///< one entry per repetition
  double meanMae = 0.0;
  bool compared = false;    ///< false for the reference method or when it was not run
  double improvement = 0.0; ///< (competitor - reference) / competitor, on mean MAE
  double pValue = 1.0;
  std::string stars;
  std::array<int, 3> branches{0, 0, 0};  ///< hybrid branch counts: select-mde, select-ear, blend
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CellResult> cells;  ///< ordered by method (config order), then budget
  double seconds = 0.0;

  const CellResult& cell(Method method, int budget) const;
  bool has(Method method, int budget) const;
};

double mae(std::span<const double> estimates, std::span<const double> truths);

ExperimentResult run_experiment(const Corpus& corpus, const ExperimentConfig& config);

}  // namespace dqest
