#include "dqest/baselines.hpp"
#include "dqest/dq.hpp"

namespace dqest {

std::vector<double> global_model_agreement(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                           const Classifier& model) {
  std::vector<double> out;
  out.reserve(workers.size());
  for (const auto& w : workers) {
    if (w.records.empty()) throw ValidationError("baseline: worker " + std::to_string(w.id) + " has no records");
    std::size_t agree = 0;
    for (const auto& r : w.records) {
      int reference;
      if (r.groundTruthKnown) {
        reference = corpus.labels.at(static_cast<std::size_t>(r.instance));
        check_binary(reference, "ground-truth label");
      } else {
        reference = model.predict_p1(corpus.features.row(r.instance).data()) > 0.5 ? 1 : 0;
      }
      agree += r.decision == reference ? 1 : 0;
    }
    out.push_back(static_cast<double>(agree) / static_cast<double>(w.n()));
  }
  return out;
}

std::vector<double> gm_gt_estimate(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                   const ClassifierConfig& config) {
  const BaseModelBank bank = train_bank(corpus, workers, config, BankMode::GlobalGt);
  return global_model_agreement(corpus, workers, bank.model(0));
}

std::vector<double> gm_all_estimate(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                    const ClassifierConfig& config) {
  const BaseModelBank bank = train_bank(corpus, workers, config, BankMode::GlobalAll);
  return global_model_agreement(corpus, workers, bank.model(0));
}

}  // namespace dqest
