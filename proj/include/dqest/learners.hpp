#pragma once

#include "dqest/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dqest {

enum class Algorithm { Forest, LogitBoost };

struct ClassifierConfig {
  Algorithm algorithm = Algorithm::Forest;
  int treeCount = 100;
  int maxDepth = 0;  ///< 0 means unbounded
  int minLeafSize = 1;
  int boostingRounds = 50;
  std::uint64_t seed = 0;
};

void validate(const ClassifierConfig& config);
const char* to_string(Algorithm algorithm);

struct ClassProbabilities {
  double p0 = 0.5;
  double p1 = 0.5;
};

/// Binary probability estimator. Immutable once trained.
///
/// Forests average Laplace-smoothed leaf frequencies (c + 1) / (m + 2);
/// LogitBoost maps its additive score through the logistic link. Both keep
/// every probability strictly inside (0, 1).
class Classifier {
 public:
  Classifier() = default;

  ClassProbabilities predict_proba(FeatureRow x) const;
  /// Probability of class 1 for a contiguous feature vector of featureDim() values.
  double predict_p1(const double* x) const;

  Index featureDim() const { return featureDim_; }
  Algorithm algorithm() const { return algorithm_; }
  bool isConstant() const { return constant_; }
  std::size_t treeCount() const { return treeRoots_.size(); }

 private:
  friend class ClassifierBuilder;

  // Preorder layout: a split node's left child is the next node and its
  // right child sits at `right`. Leaves have feature < 0 and store p1.
  struct Node {
    double value = 0.0;
    std::int32_t feature = -1;
    std::int32_t right = 0;
  };
  struct Stump {
    std::int32_t feature = 0;
    double threshold = 0.0;
    double left = 0.0;
    double right = 0.0;
  };

  Algorithm algorithm_ = Algorithm::Forest;
  Index featureDim_ = 0;
  bool constant_ = false;
  double constantP1_ = 0.5;
  std::vector<Node> nodes_;
  std::vector<std::int32_t> treeRoots_;
  std::vector<Stump> stumps_;
};

/// Trains on `rows` of X with the matching `labels` (one per row).
/// Single-class data yields a constant Laplace-smoothed predictor.
Classifier train_classifier(const ClassifierConfig& config, const FeatureMatrix& X, std::span<const Index> rows,
                            std::span<const int> labels);

/// Trains on every row of X.
Classifier train_classifier(const ClassifierConfig& config, const FeatureMatrix& X, std::span<const int> labels);

ClassProbabilities predict_proba(const Classifier& model, FeatureRow x);

/// Stacks ragged input into a matrix; throws when row lengths differ.
FeatureMatrix stack_rows(const std::vector<std::vector<double>>& rows);

/// Area under the ROC curve (Mann-Whitney, ties count one half).
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct LinearMap {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares of y on x.
LinearMap fit_linear(std::span<const double> x, std::span<const double> y);

inline double apply_linear(const LinearMap& map, double x) { return map.slope * x + map.intercept; }

}  // namespace dqest
