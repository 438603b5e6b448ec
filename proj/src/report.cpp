#include "dqest/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace dqest {

namespace {

std::string num(double v, int precision = 6) {
  if (std::isnan(v)) return "";
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

}  // namespace

void write_estimates(std::ostream& out, const std::vector<EstimateRow>& rows) {
  out << "worker_id,ear,mde,hyb,branch,p_mde,p_ear\n";
  for (const auto& r : rows) {
    out << r.worker << ',' << opt(r.ear) << ',' << opt(r.mde) << ',' << opt(r.hyb) << ',' << r.branch << ','
        << opt(r.pMde) << ',' << opt(r.pEar) << '\n';
  }
}

void write_result_csv(std::ostream& out, const ExperimentResult& result) {
  out << "method,budget,rep,mae\n";
  for (const auto& cell : result.cells) {
    for (std::size_t rep = 0; rep < cell.mae.size(); ++rep) {
      out << to_string(cell.method) << ',' << cell.budget << ',' << rep << ',' << num(cell.mae[rep]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << "method,budget,mean_mae,improv_vs_ref,stars\n";
  for (const auto& cell : result.cells) {
    out << to_string(cell.method) << ',' << cell.budget << ',' << num(cell.meanMae) << ','
        << (cell.compared ? num(cell.improvement, 4) : "") << ',' << cell.stars << '\n';
  }
}

void write_markdown_table(std::ostream& out, const ExperimentResult& result) {
  const auto& config = result.config;
  out << "| GT |";
  for (Method m : config.methods) out << ' ' << to_string(m) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < config.methods.size(); ++i) out << "---|";
  out << '\n';
  for (int b : config.budgets) {
    out << "| " << b << " |";
    for (Method m : config.methods) {
      const auto& cell = result.cell(m, b);
      out << ' ' << num(cell.meanMae, 3) << cell.stars;
      if (cell.compared) out << " (" << num(100.0 * cell.improvement, 1) << "%)";
      out << " |";
    }
    out << '\n';
  }
  out << "\nReference: " << to_string(config.reference)
      << ". Percentages are the reference's relative MAE reduction; ** p<0.05, * p<0.1 (paired t-test over "
      << config.repetitions << " repetitions).\n";
}

void write_metadata(std::ostream& out, const BenchConfig& config) {
  const auto& e = config.experiment;
  out << "# tool: dqest " << kToolVersion << '\n';
  out << "# master_seed: " << e.masterSeed << '\n';
  out << "# corpus_seed: " << config.corpusSeed << '\n';
  out << "# seed_scheme: splitmix64 counter hash of (seed, fnv1a(purpose tag), index)\n";
  out << "# learner: " << to_string(e.learner.algorithm) << " trees=" << e.learner.treeCount
      << " max_depth=" << e.learner.maxDepth << " min_leaf=" << e.learner.minLeafSize
      << " boosting_rounds=" << e.learner.boostingRounds << '\n';
  std::istringstream echo(format_config(config));
  std::string line;
  while (std::getline(echo, line)) out << "# config: " << line << '\n';
}

}  // namespace dqest
