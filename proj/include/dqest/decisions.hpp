#pragma once

#include "dqest/core.hpp"

#include <string>
#include <vector>

namespace dqest {

/// Worker decisions read from a user file, with the instance features
/// collected into a corpus. Labels are kUnknownLabel where not supplied.
struct DecisionTable {
  Corpus corpus;
  std::vector<WorkerDecisionSet> workers;  ///< in order of first appearance
};

/// Columns: worker_id,instance_id,f0..f{D-1},decision,<gtColumn>[,true_label].
/// true_label is required on rows whose ground-truth flag is 1. An
/// instance may appear under one worker only.
DecisionTable parse_decisions_csv(const std::string& text, const std::string& gtColumn = "gt_known");

/// Columns: instance_id,f0..f{D-1},true_label. The rows are appended to
/// `table.corpus` and returned as an exclusive pool. Instances already
/// decided by a worker are rejected.
GroundTruthPool append_exclusive_csv(DecisionTable& table, const std::string& text);

}  // namespace dqest
