#pragma once

#include "dqest/core.hpp"
#include "dqest/learners.hpp"

#include <vector>

namespace dqest {

/// Agreement of each worker with a reference labeling: the true label on
/// ground-truth records, the global model's prediction elsewhere.
std::vector<double> global_model_agreement(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                           const Classifier& model);

/// Reference model trained on the pooled ground-truth records only.
std::vector<double> gm_gt_estimate(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                   const ClassifierConfig& config);

/// Reference model trained on every record, ground truth substituted.
std::vector<double> gm_all_estimate(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                    const ClassifierConfig& config);

}  // namespace dqest
