#include "dqest/dq.hpp"
#include "dqest/rng.hpp"

#include <string>

namespace dqest {

const char* to_string(BankMode mode) {
  switch (mode) {
    case BankMode::Ensemble: return "ensemble";
    case BankMode::GlobalAll: return "global-all";
    case BankMode::GlobalGt: return "global-gt";
  }
  return "?";
}

WorkerId BaseModelBank::origin_of(Index instance) const {
  const auto it = origins_.find(instance);
  return it == origins_.end() ? kNoWorker : it->second;
}

BaseModelBank BaseModelBank::assemble(BankMode mode, std::vector<Classifier> models, std::vector<WorkerId> owners,
                                      std::unordered_map<Index, WorkerId> origins,
                                      std::vector<std::size_t> trainingRows) {
  if (models.size() != owners.size() || models.size() != trainingRows.size()) {
    throw ValidationError("BaseModelBank: models, owners and row counts differ in length");
  }
  if (mode != BankMode::Ensemble && models.size() != 1) {
    throw ValidationError("BaseModelBank: global modes hold exactly one model");
  }
  BaseModelBank bank;
  bank.mode_ = mode;
  bank.models_ = std::move(models);
  bank.owners_ = std::move(owners);
  bank.origins_ = std::move(origins);
  bank.trainingRows_ = std::move(trainingRows);
  return bank;
}

std::vector<int> training_labels(const Corpus& corpus, const WorkerDecisionSet& worker) {
  std::vector<int> labels;
  labels.reserve(worker.n());
  for (const auto& r : worker.records) {
    check_binary(r.decision, "decision");
    if (r.groundTruthKnown) {
      const int truth = corpus.labels.at(static_cast<std::size_t>(r.instance));
      check_binary(truth, "ground-truth label");
      labels.push_back(truth);
    } else {
      labels.push_back(r.decision);
    }
  }
  return labels;
}

BaseModelBank train_bank(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                         const ClassifierConfig& config, BankMode mode) {
  return train_bank(corpus, workers, config, mode, {});
}

BaseModelBank train_bank(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                         const ClassifierConfig& config, BankMode mode, const std::vector<Augmentation>& extra) {
  if (mode == BankMode::Ensemble) {
    if (workers.size() < 2) throw ValidationError("train_bank: the ensemble needs at least 2 workers");
    std::vector<Classifier> models;
    std::vector<WorkerId> owners;
    std::vector<std::size_t> rowsSeen;
    std::unordered_map<Index, WorkerId> origins;
    for (std::size_t k = 0; k < workers.size(); ++k) {
      const auto& worker = workers[k];
      std::vector<Index> rows;
      rows.reserve(worker.n());
      for (const auto& r : worker.records) rows.push_back(r.instance);
      std::vector<int> labels = training_labels(corpus, worker);
      for (const auto& aug : extra) {
        if (aug.worker != worker.id) continue;
        if (aug.instances.size() != aug.labels.size()) throw ValidationError("train_bank: augmentation length mismatch");
        rows.insert(rows.end(), aug.instances.begin(), aug.instances.end());
        labels.insert(labels.end(), aug.labels.begin(), aug.labels.end());
      }
      if (rows.empty()) throw ValidationError("train_bank: worker " + std::to_string(worker.id) + " has no records");
      for (Index i : rows) {
        if (!origins.emplace(i, worker.id).second) {
          throw ValidationError("train_bank: instance " + std::to_string(i) + " belongs to more than one worker");
        }
      }
      ClassifierConfig perWorker = config;
      perWorker.seed = derive_seed(config.seed, "base-model", k);
      models.push_back(train_classifier(perWorker, corpus.features, rows, labels));
      owners.push_back(worker.id);
      rowsSeen.push_back(rows.size());
    }
    return BaseModelBank::assemble(mode, std::move(models), std::move(owners), std::move(origins), std::move(rowsSeen));
  }

  std::vector<Index> rows;
  std::vector<int> labels;
  for (const auto& worker : workers) {
    const std::vector<int> substituted = training_labels(corpus, worker);
    for (std::size_t i = 0; i < worker.n(); ++i) {
      if (mode == BankMode::GlobalGt && !worker.records[i].groundTruthKnown) continue;
      rows.push_back(worker.records[i].instance);
      labels.push_back(substituted[i]);
    }
  }
  for (const auto& aug : extra) {
    rows.insert(rows.end(), aug.instances.begin(), aug.instances.end());
    labels.insert(labels.end(), aug.labels.begin(), aug.labels.end());
  }
  if (rows.empty()) {
    throw ValidationError(mode == BankMode::GlobalGt ? "train_bank: no ground-truth records for a GT-only model"
                                                      : "train_bank: no records");
  }
  ClassifierConfig global = config;
  global.seed = derive_seed(config.seed, "global-model");
  std::vector<Classifier> models;
  models.push_back(train_classifier(global, corpus.features, rows, labels));
  return BaseModelBank::assemble(mode, std::move(models), {kNoWorker}, {}, {rows.size()});
}

namespace {

EnsemblePrediction infer_dense(const BaseModelBank& bank, const double* x, WorkerId excludeOrigin,
                               std::vector<std::size_t>* consulted) {
  if (bank.mode() != BankMode::Ensemble) {
    if (consulted) consulted->push_back(0);
    const double p1 = bank.model(0).predict_p1(x);
    return p1 > 0.5 ? EnsemblePrediction{1, p1} : EnsemblePrediction{0, 1.0 - p1};
  }
  double sum0 = 0.0, sum1 = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < bank.size(); ++j) {
    if (excludeOrigin != kNoWorker && bank.owner(j) == excludeOrigin) continue;
    if (consulted) consulted->push_back(j);
    const double p1 = bank.model(j).predict_p1(x);
    sum1 += p1;
    sum0 += 1.0 - p1;
    ++used;
  }
  if (used == 0) throw ValidationError("ensemble_infer: exclusion leaves no base model");
  return sum1 > sum0 ? EnsemblePrediction{1, sum1} : EnsemblePrediction{0, sum0};
}

}  // namespace

EnsemblePrediction ensemble_infer(const BaseModelBank& bank, FeatureRow x, WorkerId excludeOrigin,
                                  std::vector<std::size_t>* consulted) {
  if (bank.size() == 0) throw ValidationError("ensemble_infer: empty bank");
  if (x.size() != bank.model(0).featureDim()) throw ValidationError("ensemble_infer: feature dimension mismatch");
  const Eigen::RowVectorXd dense = x;
  return infer_dense(bank, dense.data(), excludeOrigin, consulted);
}

EnsembleCache::EnsembleCache(const BaseModelBank& bank, const Corpus& corpus, std::span<const Index> instances) {
  if (bank.size() == 0) throw ValidationError("EnsembleCache: empty bank");
  const bool global = bank.mode() != BankMode::Ensemble;
  std::vector<Index> unique;
  for (Index i : instances) {
    if (slot_.contains(i)) continue;
    if (i < 0 || i >= corpus.size()) throw ValidationError("EnsembleCache: instance out of range");
    slot_.emplace(i, unique.size());
    unique.push_back(i);
    origins_.push_back(global ? kNoWorker : bank.origin_of(i));
  }
  // Model-major traversal keeps one forest hot in cache at a time; the
  // per-instance sums accumulate in the same order as infer_dense.
  std::vector<double> sum0(unique.size(), 0.0), sum1(unique.size(), 0.0);
  std::vector<std::size_t> used(unique.size(), 0);
  for (std::size_t j = 0; j < bank.size(); ++j) {
    const Classifier& model = bank.model(j);
    for (std::size_t u = 0; u < unique.size(); ++u) {
      if (!global && origins_[u] != kNoWorker && bank.owner(j) == origins_[u]) continue;
      const double p1 = model.predict_p1(corpus.features.row(unique[u]).data());
      sum1[u] += p1;
      sum0[u] += 1.0 - p1;
      ++used[u];
    }
  }
  predictions_.reserve(unique.size());
  for (std::size_t u = 0; u < unique.size(); ++u) {
    if (used[u] == 0) throw ValidationError("ensemble_infer: exclusion leaves no base model");
    if (global) {
      const double p1 = sum1[u];
      predictions_.push_back(p1 > 0.5 ? EnsemblePrediction{1, p1} : EnsemblePrediction{0, 1.0 - p1});
    } else {
      predictions_.push_back(sum1[u] > sum0[u] ? EnsemblePrediction{1, sum1[u]} : EnsemblePrediction{0, sum0[u]});
    }
  }
  global_ = global;
}

const EnsemblePrediction& EnsembleCache::at(Index instance, WorkerId origin) const {
  const auto it = slot_.find(instance);
  if (it == slot_.end()) throw ValidationError("EnsembleCache: instance " + std::to_string(instance) + " not cached");
  if (!global_ && origins_[it->second] != origin) {
    throw ValidationError("EnsembleCache: instance " + std::to_string(instance) + " was cached for origin " +
                          std::to_string(origins_[it->second]) + ", queried with " + std::to_string(origin));
  }
  return predictions_[it->second];
}

namespace {

template <class Lookup>
double agreement(std::span<const ScoredDecision> decisions, Lookup&& lookup) {
  if (decisions.empty()) throw ValidationError("dq_score: no decisions");
  double agree = 0.0, disagree = 0.0;
  for (const auto& d : decisions) {
    const EnsemblePrediction p = lookup(d);
    (d.decision == p.label ? agree : disagree) += p.confidence;
  }
  const double total = agree + disagree;
  return total > 0.0 ? agree / total : 0.5;
}

}  // namespace

double dq_score(std::span<const ScoredDecision> decisions, const EnsembleCache& cache) {
  return agreement(decisions, [&](const ScoredDecision& d) { return cache.at(d.instance, d.origin); });
}

double dq_score(std::span<const ScoredDecision> decisions, const BaseModelBank& bank, const Corpus& corpus) {
  return agreement(decisions, [&](const ScoredDecision& d) {
    return ensemble_infer(bank, corpus.row(d.instance), bank.mode() == BankMode::Ensemble ? d.origin : kNoWorker);
  });
}

}  // namespace dqest
