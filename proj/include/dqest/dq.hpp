#pragma once

#include "dqest/core.hpp"
#include "dqest/learners.hpp"

#include <span>
#include <unordered_map>
#include <vector>

namespace dqest {

enum class BankMode {
  Ensemble,   ///< one base model per worker, leave-origin-out inference
  GlobalAll,  ///< one model on every record (ground truth substituted)
  GlobalGt,   ///< one model on the pooled ground-truth records only
};

const char* to_string(BankMode mode);

/// Base models plus the bookkeeping needed to leave out the model whose
/// training set contains a given instance.
class BaseModelBank {
 public:
  BankMode mode() const { return mode_; }
  std::size_t size() const { return models_.size(); }
  const Classifier& model(std::size_t i) const { return models_[i]; }
  /// Worker that owns model i (kNoWorker for a global model).
  WorkerId owner(std::size_t i) const { return owners_[i]; }
  /// Worker whose base model trained on `instance`, or kNoWorker.
  WorkerId origin_of(Index instance) const;
  /// Number of training rows seen by model i.
  std::size_t training_rows(std::size_t i) const { return trainingRows_[i]; }

  /// Builds a bank from already-trained parts. Ensemble banks key models by
  /// `owners`; `origins` maps each training instance to its owner.
  static BaseModelBank assemble(BankMode mode, std::vector<Classifier> models, std::vector<WorkerId> owners,
                                std::unordered_map<Index, WorkerId> origins, std::vector<std::size_t> trainingRows);

 private:
  BankMode mode_ = BankMode::Ensemble;
  std::vector<Classifier> models_;
  std::vector<WorkerId> owners_;
  std::unordered_map<Index, WorkerId> origins_;
  std::vector<std::size_t> trainingRows_;
};

/// Training labels for a worker: noisy decisions, with the correct label
/// substituted where ground truth is known.
std::vector<int> training_labels(const Corpus& corpus, const WorkerDecisionSet& worker);

BaseModelBank train_bank(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                         const ClassifierConfig& config, BankMode mode);

/// Extra training rows per worker, appended to that worker's own records
/// (used when exclusive ground truth is shared out among base models).
struct Augmentation {
  WorkerId worker = kNoWorker;
  std::vector<Index> instances;
  std::vector<int> labels;
};

BaseModelBank train_bank(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                         const ClassifierConfig& config, BankMode mode, const std::vector<Augmentation>& extra);

struct EnsemblePrediction {
  int label = 0;
  double confidence = 0.0;
};

/// Argmax of summed class probabilities over the eligible models (all but
/// the one owned by `excludeOrigin`); ties go to class 0. The confidence is
/// the summed probability of the chosen class. Global banks answer with
/// their single model. When `consulted` is given, the indices of the models
/// that were evaluated are appended to it.
EnsemblePrediction ensemble_infer(const BaseModelBank& bank, FeatureRow x, WorkerId excludeOrigin,
                                  std::vector<std::size_t>* consulted = nullptr);

/// Pre-computed leave-origin-out ensemble predictions for a set of
/// instances. Scoring many decision sets over the same instances (synthetic
/// workers, bootstrap samples) then costs one lookup per decision.
class EnsembleCache {
 public:
  EnsembleCache() = default;
  /// Infers every listed instance, excluding the model of its bank origin.
  EnsembleCache(const BaseModelBank& bank, const Corpus& corpus, std::span<const Index> instances);

  bool contains(Index instance) const { return slot_.contains(instance); }
  const EnsemblePrediction& at(Index instance, WorkerId origin) const;
  std::size_t size() const { return predictions_.size(); }

 private:
  std::unordered_map<Index, std::size_t> slot_;
  std::vector<EnsemblePrediction> predictions_;
  std::vector<WorkerId> origins_;
  bool global_ = false;
};

/// Confidence-weighted agreement between the decisions and the ensemble:
/// agree / (agree + disagree), 0.5 when both sums vanish.
double dq_score(std::span<const ScoredDecision> decisions, const EnsembleCache& cache);

/// Same score, inferring each instance directly from the bank.
double dq_score(std::span<const ScoredDecision> decisions, const BaseModelBank& bank, const Corpus& corpus);

}  // namespace dqest
