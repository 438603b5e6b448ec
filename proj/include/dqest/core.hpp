#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqest {

using Index = Eigen::Index;
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FeatureRow = Eigen::Ref<const Eigen::RowVectorXd>;

using WorkerId = int;
inline constexpr WorkerId kNoWorker = -1;

/// Label value stored for instances whose correct class is not known
/// (only possible for user-supplied decision files).
inline constexpr int kUnknownLabel = -1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Instances of one data domain. Row i of `features` is instance i;
/// everything else in the library refers to instances by row index.
struct Corpus {
  FeatureMatrix features;
  std::vector<int> labels;
  std::vector<std::string> ids;

  Index size() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  FeatureRow row(Index i) const { return features.row(i); }
};

struct DecisionRecord {
  Index instance = 0;
  int decision = 0;
  bool groundTruthKnown = false;
};

/// One worker's exclusive decision history. Flagged records form GT_k.
struct WorkerDecisionSet {
  WorkerId id = 0;
  std::vector<DecisionRecord> records;

  std::size_t n() const { return records.size(); }
  std::size_t t() const {
    std::size_t count = 0;
    for (const auto& r : records) count += r.groundTruthKnown ? 1 : 0;
    return count;
  }
};

struct GroundTruthEntry {
  Index instance = 0;
  int label = 0;
  WorkerId origin = kNoWorker;
};

struct GroundTruthPool {
  std::vector<GroundTruthEntry> entries;
  bool exclusive = false;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

/// A decision to be scored against the ensemble: which instance, what was
/// decided, and whose base model must be left out when inferring it.
struct ScoredDecision {
  Index instance = 0;
  int decision = 0;
  WorkerId origin = kNoWorker;
};

/// GT = union of the workers' flagged records, labelled by the corpus.
GroundTruthPool pool_from_workers(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers);

/// The worker's records as ensemble-scoring input (origin = worker id).
std::vector<ScoredDecision> scored_decisions(const WorkerDecisionSet& worker);

/// Fraction of the worker's records whose decision matches the corpus label.
double realized_accuracy(const Corpus& corpus, const WorkerDecisionSet& worker);

void check_binary(int value, const char* what);

}  // namespace dqest
