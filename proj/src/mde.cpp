#include "dqest/mde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dqest {

void validate(const MdeConfig& config) {
  if (config.replicates < 1) throw ValidationError("MDE replicates must be >= 1");
  if (config.syntheticWorkers < 2) throw ValidationError("MDE needs at least 2 synthetic workers per mapping");
  if (!(config.step > 0.0)) throw ValidationError("MDE accuracy step must be positive");
  if (!(config.qMin >= 0.5 && config.qMax <= 1.0 && config.qMin < config.qMax)) {
    throw ValidationError("MDE accuracy range must lie within [0.5, 1]");
  }
  if (synthetic_accuracy(config, config.syntheticWorkers - 1) < config.qMin - 1e-9) {
    throw ValidationError("MDE grid leaves [qMin, qMax]: syntheticWorkers * step too large");
  }
}

double synthetic_accuracy(const MdeConfig& config, int n) { return config.qMax - n * config.step; }

std::size_t synthetic_flip_count(std::size_t poolSize, double q) {
  return static_cast<std::size_t>(std::round(static_cast<double>(poolSize) * (1.0 - q)));
}

SyntheticWorker make_synthetic_worker(const GroundTruthPool& pool, double q, Rng& rng) {
  if (!(q >= 0.5 && q <= 1.0)) throw ValidationError("synthetic accuracy must lie in [0.5, 1], got " + std::to_string(q));
  if (pool.empty()) throw ValidationError("make_synthetic_worker: empty ground-truth pool");
  SyntheticWorker worker;
  worker.targetAccuracy = q;
  worker.records.reserve(pool.size());
  for (const auto& e : pool.entries) worker.records.push_back({e.instance, e.label, e.origin});
  const std::size_t flips = synthetic_flip_count(pool.size(), q);
  for (auto i : sample_without_replacement(pool.size(), flips, rng)) {
    worker.records[i].decision = 1 - worker.records[i].decision;
  }
  return worker;
}

MdeModel fit_mde(BaseModelBank bank, const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                 const GroundTruthPool& pool, const MdeConfig& config, std::vector<MappingSample>* samples) {
  validate(config);
  if (pool.empty()) throw ValidationError("fit_mde: empty ground-truth pool");

  std::vector<Index> instances;
  for (const auto& w : workers) {
    for (const auto& r : w.records) instances.push_back(r.instance);
  }
  for (const auto& e : pool.entries) instances.push_back(e.instance);

  MdeModel model{std::move(bank), {}, {}};
  model.cache = EnsembleCache(model.bank, corpus, instances);

  if (samples) samples->clear();
  for (int c = 0; c < config.replicates; ++c) {
    Rng rng = make_rng(config.seed, "mde-replicate", static_cast<std::uint64_t>(c));
    MappingSample sample;
    for (int n = 0; n < config.syntheticWorkers; ++n) {
      const double q = synthetic_accuracy(config, n);
      const SyntheticWorker sw = make_synthetic_worker(pool, q, rng);
      sample.dq.push_back(dq_score(sw.records, model.cache));
      sample.q.push_back(q);
    }
    model.mappings.push_back(fit_linear(sample.dq, sample.q));
    if (samples) samples->push_back(std::move(sample));
  }
  return model;
}

MdeModel fit_mde(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers, const GroundTruthPool& pool,
                 const MdeConfig& config, const ClassifierConfig& classifierConfig,
                 std::vector<MappingSample>* samples) {
  validate(config);
  if (pool.empty()) throw ValidationError("fit_mde: empty ground-truth pool");
  if (config.bankMode == BankMode::Ensemble && workers.size() < 2) {
    throw ValidationError("fit_mde: the ensemble needs at least 2 workers");
  }
  BaseModelBank bank = train_bank(corpus, workers, classifierConfig, config.bankMode);
  return fit_mde(std::move(bank), corpus, workers, pool, config, samples);
}

double produce_assessment(std::span<const LinearMap> mappings, double dq) {
  if (mappings.empty()) throw ValidationError("produce_assessment: no mappings");
  double sum = 0.0;
  for (const auto& m : mappings) sum += std::clamp(apply_linear(m, dq), 0.5, 1.0);
  return sum / static_cast<double>(mappings.size());
}

double assess_worker(const MdeModel& model, const WorkerDecisionSet& worker) {
  if (worker.records.empty()) throw ValidationError("assess_worker: worker has no records");
  const auto decisions = scored_decisions(worker);
  return produce_assessment(model.mappings, dq_score(decisions, model.cache));
}

std::vector<double> assess_workers(const MdeModel& model, const std::vector<WorkerDecisionSet>& workers) {
  std::vector<double> out;
  out.reserve(workers.size());
  for (const auto& w : workers) out.push_back(assess_worker(model, w));
  return out;
}

}  // namespace dqest
