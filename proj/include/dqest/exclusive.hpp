#pragma once

#include "dqest/core.hpp"
#include "dqest/dq.hpp"
#include "dqest/learners.hpp"
#include "dqest/mde.hpp"

#include <vector>

namespace dqest {

/// Splits the exclusive pool into one share per worker (sizes differ by at
/// most one) and returns the shares as base-model augmentations. The
/// returned pool copy has each entry's origin set to its recipient.
std::vector<Augmentation> share_exclusive_pool(const GroundTruthPool& pool,
                                               const std::vector<WorkerDecisionSet>& workers, Rng& rng,
                                               GroundTruthPool* assigned = nullptr);

/// MDE when ground truth exists only for instances no worker decided. The
/// exclusive instances are shared out among the base models and the
/// synthetic workers are built on them; a base model is left out when
/// scoring an instance from its own share.
std::vector<double> mde_exclusive(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                  const GroundTruthPool& exclusivePool, const MdeConfig& mdeConfig,
                                  const ClassifierConfig& classifierConfig, Rng& rng);

}  // namespace dqest
