#pragma once

#include "dqest/config.hpp"
#include "dqest/simharness.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dqest {

inline constexpr const char* kToolVersion = "0.1.0";

/// One row of the estimate CSV: worker_id,ear,mde,hyb,branch,p_mde,p_ear.
/// Absent values are written as empty fields.
struct EstimateRow {
  WorkerId worker = kNoWorker;
  std::optional<double> ear;
  std::optional<double> mde;
  std::optional<double> hyb;
  std::string branch;
  std::optional<double> pMde;
  std::optional<double> pEar;
};

void write_estimates(std::ostream& out, const std::vector<EstimateRow>& rows);

/// method,budget,rep,mae
void write_result_csv(std::ostream& out, const ExperimentResult& result);
/// method,budget,mean_mae,improv_vs_ref,stars
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
/// Budgets as rows, methods as columns; competitors carry significance
/// stars and their improvement over the reference.
void write_markdown_table(std::ostream& out, const ExperimentResult& result);

/// `# key: value` lines: tool version, seeds, learner settings and the
/// full configuration echo.
void write_metadata(std::ostream& out, const BenchConfig& config);

}  // namespace dqest
