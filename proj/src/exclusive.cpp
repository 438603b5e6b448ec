#include "dqest/exclusive.hpp"

#include <string>
#include <unordered_set>

namespace dqest {

std::vector<Augmentation> share_exclusive_pool(const GroundTruthPool& pool,
                                               const std::vector<WorkerDecisionSet>& workers, Rng& rng,
                                               GroundTruthPool* assigned) {
  if (pool.empty()) throw ValidationError("exclusive pool is empty");
  if (workers.size() < 2) throw ValidationError("exclusive MDE needs at least 2 workers");

  std::unordered_set<Index> decided;
  for (const auto& w : workers) {
    for (const auto& r : w.records) decided.insert(r.instance);
  }
  std::unordered_set<Index> seen;
  for (const auto& e : pool.entries) {
    if (decided.contains(e.instance)) {
      throw ValidationError("exclusive pool instance " + std::to_string(e.instance) + " was decided by a worker");
    }
    if (!seen.insert(e.instance).second) {
      throw ValidationError("exclusive pool lists instance " + std::to_string(e.instance) + " twice");
    }
    check_binary(e.label, "exclusive ground-truth label");
  }

  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(std::span<std::size_t>(order), rng);

  std::vector<Augmentation> shares(workers.size());
  for (std::size_t k = 0; k < workers.size(); ++k) shares[k].worker = workers[k].id;
  if (assigned) {
    *assigned = pool;
    assigned->exclusive = true;
  }
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    auto& share = shares[pos % workers.size()];
    const auto& e = pool.entries[order[pos]];
    share.instances.push_back(e.instance);
    share.labels.push_back(e.label);
    if (assigned) assigned->entries[order[pos]].origin = share.worker;
  }
  return shares;
}

std::vector<double> mde_exclusive(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                  const GroundTruthPool& exclusivePool, const MdeConfig& mdeConfig,
                                  const ClassifierConfig& classifierConfig, Rng& rng) {
  validate(mdeConfig);
  GroundTruthPool assigned;
  const auto shares = share_exclusive_pool(exclusivePool, workers, rng, &assigned);
  BaseModelBank bank = train_bank(corpus, workers, classifierConfig, BankMode::Ensemble, shares);
  const MdeModel model = fit_mde(std::move(bank), corpus, workers, assigned, mdeConfig);
  return assess_workers(model, workers);
}

}  // namespace dqest
