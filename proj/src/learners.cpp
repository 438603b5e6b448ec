#include "dqest/learners.hpp"
#include "dqest/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dqest {

void validate(const ClassifierConfig& config) {
  if (config.treeCount < 1) throw ValidationError("treeCount must be >= 1");
  if (config.boostingRounds < 1) throw ValidationError("boostingRounds must be >= 1");
  if (config.minLeafSize < 1) throw ValidationError("minLeafSize must be >= 1");
  if (config.maxDepth < 0) throw ValidationError("maxDepth must be >= 0 (0 = unbounded)");
}

const char* to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Forest ? "forest" : "logitboost";
}

namespace {

constexpr double kGainEps = 1e-12;
constexpr double kMaxLogit = 30.0;  // |2F| cap keeps p strictly inside (0, 1)

// Column-major copy of the training rows; split search walks columns.
// rank[f][s] is the dense rank of sample s in column f, so a node sorts
// packed (rank, sample) integers instead of doubles.
struct TrainingColumns {
  Eigen::MatrixXd X;
  std::vector<int> y;
  std::vector<std::vector<std::uint32_t>> rank;
};

TrainingColumns gather(const FeatureMatrix& X, std::span<const Index> rows, std::span<const int> labels) {
  TrainingColumns out;
  out.X.resize(static_cast<Index>(rows.size()), X.cols());
  out.y.assign(labels.begin(), labels.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= X.rows()) throw ValidationError("training row index out of range");
    out.X.row(static_cast<Index>(i)) = X.row(rows[i]);
  }
  const auto n = static_cast<std::size_t>(out.X.rows());
  out.rank.assign(static_cast<std::size_t>(out.X.cols()), std::vector<std::uint32_t>(n));
  std::vector<std::uint32_t> order(n);
  for (Index f = 0; f < out.X.cols(); ++f) {
    const double* column = out.X.col(f).data();
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return column[a] < column[b]; });
    auto& rank = out.rank[static_cast<std::size_t>(f)];
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && column[order[i]] != column[order[i - 1]]) ++r;
      rank[order[i]] = r;
    }
  }
  return out;
}

struct SplitCandidate {
  double gain = kGainEps;
  Index feature = -1;
  double threshold = 0.0;
};

class TreeGrower {
 public:
  TreeGrower(const TrainingColumns& data, const ClassifierConfig& config, Rng& rng)
      : data_(data), config_(config), rng_(rng) {
    const Index dim = data.X.cols();
    mtry_ = std::max<Index>(1, static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(dim)))));
    mtry_ = std::min(mtry_, dim);
    features_.resize(static_cast<std::size_t>(dim));
    std::iota(features_.begin(), features_.end(), 0);
  }

  template <class Node>
  void grow(std::vector<Node>& nodes) {
    const auto m = static_cast<std::size_t>(data_.X.rows());
    // Bootstrap of size m, stored as multiplicities over distinct samples.
    weight_.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) ++weight_[uniform_index(rng_, m)];
    samples_.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (weight_[i] > 0) samples_.push_back(static_cast<std::int32_t>(i));
    }
    build(nodes, 0, samples_.size(), 0);
  }

 private:
  template <class Node>
  void build(std::vector<Node>& nodes, std::size_t begin, std::size_t end, int depth) {
    double w0 = 0.0, w1 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const auto s = static_cast<std::size_t>(samples_[i]);
      (data_.y[s] == 1 ? w1 : w0) += weight_[s];
    }
    const auto self = nodes.size();
    nodes.emplace_back();

    const double total = w0 + w1;
    const bool pure = w0 == 0.0 || w1 == 0.0;
    const bool depthCapped = config_.maxDepth > 0 && depth >= config_.maxDepth;
    SplitCandidate best;
    if (!pure && !depthCapped && total >= 2.0 * config_.minLeafSize) best = find_split(begin, end, w0, w1);

    if (best.feature < 0) {
      nodes[self].feature = -1;
      nodes[self].value = (w1 + 1.0) / (total + 2.0);
      return;
    }

    const auto mid = static_cast<std::size_t>(
        std::partition(samples_.begin() + static_cast<std::ptrdiff_t>(begin), samples_.begin() + static_cast<std::ptrdiff_t>(end),
                       [&](std::int32_t s) { return data_.X(s, best.feature) <= best.threshold; }) -
        samples_.begin());
    nodes[self].feature = static_cast<std::int32_t>(best.feature);
    nodes[self].value = best.threshold;
    build(nodes, begin, mid, depth + 1);
    nodes[self].right = static_cast<std::int32_t>(nodes.size());
    build(nodes, mid, end, depth + 1);
  }

  SplitCandidate find_split(std::size_t begin, std::size_t end, double w0, double w1) {
    const std::size_t dim = features_.size();
    const auto k = static_cast<std::size_t>(mtry_);
    for (std::size_t i = 0; i < k; ++i) std::swap(features_[i], features_[i + uniform_index(rng_, dim - i)]);
    chosen_.assign(features_.begin(), features_.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen_.begin(), chosen_.end());

    const double total = w0 + w1;
    const double parent = 2.0 * w0 * w1 / total;
    const double minLeaf = config_.minLeafSize;
    SplitCandidate best;
    scratch_.resize(end - begin);
    for (Index f : chosen_) {
      const double* column = data_.X.col(f).data();
      const auto& rank = data_.rank[static_cast<std::size_t>(f)];
      for (std::size_t i = begin; i < end; ++i) {
        const auto s = static_cast<std::uint32_t>(samples_[i]);
        scratch_[i - begin] = (static_cast<std::uint64_t>(rank[s]) << 32) | s;
      }
      std::sort(scratch_.begin(), scratch_.end());
      if ((scratch_.front() >> 32) == (scratch_.back() >> 32)) continue;

      double l0 = 0.0, l1 = 0.0;
      for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
        const auto s = static_cast<std::size_t>(scratch_[i] & 0xffffffffu);
        (data_.y[s] == 1 ? l1 : l0) += weight_[s];
        if ((scratch_[i] >> 32) == (scratch_[i + 1] >> 32)) continue;
        const double wl = l0 + l1;
        const double wr = total - wl;
        if (wl < minLeaf || wr < minLeaf) continue;
        const double r0 = w0 - l0, r1 = w1 - l1;
        const double children = 2.0 * (l0 * l1 / wl + r0 * r1 / wr);
        const double gain = parent - children;
        if (gain > best.gain + kGainEps) {
          best.gain = gain;
          best.feature = f;
          const double lo = column[scratch_[i] & 0xffffffffu];
          const double hi = column[scratch_[i + 1] & 0xffffffffu];
          double threshold = 0.5 * (lo + hi);
          if (!(threshold < hi)) threshold = lo;
          best.threshold = threshold;
        }
      }
    }
    return best;
  }

  const TrainingColumns& data_;
  const ClassifierConfig& config_;
  Rng& rng_;
  Index mtry_ = 1;
  std::vector<Index> features_;
  std::vector<Index> chosen_;
  std::vector<double> weight_;
  std::vector<std::int32_t> samples_;
  std::vector<std::uint64_t> scratch_;
};

}  // namespace

class ClassifierBuilder {
 public:
  static Classifier constant(Index dim, Algorithm algorithm, int label, std::size_t count) {
    Classifier c;
    c.algorithm_ = algorithm;
    c.featureDim_ = dim;
    c.constant_ = true;
    const double m = static_cast<double>(count);
    const double pMajority = (m + 1.0) / (m + 2.0);
    c.constantP1_ = label == 1 ? pMajority : 1.0 - pMajority;
    return c;
  }

  static Classifier forest(const TrainingColumns& data, const ClassifierConfig& config) {
    Classifier c;
    c.algorithm_ = Algorithm::Forest;
    c.featureDim_ = data.X.cols();
    c.treeRoots_.reserve(static_cast<std::size_t>(config.treeCount));
    for (int t = 0; t < config.treeCount; ++t) {
      Rng rng = make_rng(config.seed, "forest-tree", static_cast<std::uint64_t>(t));
      TreeGrower grower(data, config, rng);
      c.treeRoots_.push_back(static_cast<std::int32_t>(c.nodes_.size()));
      grower.grow(c.nodes_);
    }
    return c;
  }

  static Classifier logitboost(const TrainingColumns& data, const ClassifierConfig& config) {
    Classifier c;
    c.algorithm_ = Algorithm::LogitBoost;
    c.featureDim_ = data.X.cols();
    const auto n = static_cast<std::size_t>(data.X.rows());
    const auto dim = data.X.cols();

    std::vector<std::vector<std::int32_t>> order(static_cast<std::size_t>(dim));
    for (Index f = 0; f < dim; ++f) {
      auto& o = order[static_cast<std::size_t>(f)];
      o.resize(n);
      std::iota(o.begin(), o.end(), 0);
      const double* column = data.X.col(f).data();
      std::stable_sort(o.begin(), o.end(), [&](std::int32_t a, std::int32_t b) { return column[a] < column[b]; });
    }

    std::vector<double> F(n, 0.0), w(n), z(n);
    for (int round = 0; round < config.boostingRounds; ++round) {
      double sw = 0.0, swz = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = 1.0 / (1.0 + std::exp(-std::clamp(2.0 * F[i], -kMaxLogit, kMaxLogit)));
        w[i] = std::max(p * (1.0 - p), 1e-12);
        z[i] = std::clamp((data.y[i] - p) / w[i], -4.0, 4.0);
        sw += w[i];
        swz += w[i] * z[i];
      }
      Classifier::Stump best{0, std::numeric_limits<double>::infinity(), swz / sw, swz / sw};
      double bestScore = swz * swz / sw + kGainEps;
      for (Index f = 0; f < dim; ++f) {
        const auto& o = order[static_cast<std::size_t>(f)];
        const double* column = data.X.col(f).data();
        double lw = 0.0, lwz = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
          const auto i = static_cast<std::size_t>(o[k]);
          lw += w[i];
          lwz += w[i] * z[i];
          const double v = column[o[k]], next = column[o[k + 1]];
          if (v == next) continue;
          const double rw = sw - lw, rwz = swz - lwz;
          const double score = lwz * lwz / lw + rwz * rwz / rw;
          if (score > bestScore + kGainEps) {
            bestScore = score;
            double threshold = 0.5 * (v + next);
            if (!(threshold < next)) threshold = v;
            best = {static_cast<std::int32_t>(f), threshold, lwz / lw, rwz / rw};
          }
        }
      }
      c.stumps_.push_back(best);
      for (std::size_t i = 0; i < n; ++i) {
        const double v = data.X(static_cast<Index>(i), best.feature);
        F[i] += 0.5 * (v <= best.threshold ? best.left : best.right);
      }
    }
    return c;
  }
};

Classifier train_classifier(const ClassifierConfig& config, const FeatureMatrix& X, std::span<const Index> rows,
                            std::span<const int> labels) {
  validate(config);
  if (rows.empty()) throw ValidationError("train_classifier: no training data");
  if (rows.size() != labels.size()) throw ValidationError("train_classifier: rows and labels differ in length");
  std::size_t ones = 0;
  for (int y : labels) {
    check_binary(y, "training label");
    ones += static_cast<std::size_t>(y);
  }
  if (ones == 0 || ones == labels.size()) {
    return ClassifierBuilder::constant(X.cols(), config.algorithm, ones == 0 ? 0 : 1, labels.size());
  }
  const TrainingColumns data = gather(X, rows, labels);
  return config.algorithm == Algorithm::Forest ? ClassifierBuilder::forest(data, config)
                                               : ClassifierBuilder::logitboost(data, config);
}

Classifier train_classifier(const ClassifierConfig& config, const FeatureMatrix& X, std::span<const int> labels) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw ValidationError("train_classifier: feature rows and labels differ in length");
  }
  std::vector<Index> rows(labels.size());
  std::iota(rows.begin(), rows.end(), Index{0});
  return train_classifier(config, X, rows, labels);
}

double Classifier::predict_p1(const double* x) const {
  if (constant_) return constantP1_;
  if (algorithm_ == Algorithm::Forest) {
    double sum = 0.0;
    for (const auto root : treeRoots_) {
      const Node* node = &nodes_[static_cast<std::size_t>(root)];
      const Node* base = nodes_.data();
      while (node->feature >= 0) {
        node = x[node->feature] <= node->value ? node + 1 : base + node->right;
      }
      sum += node->value;
    }
    return sum / static_cast<double>(treeRoots_.size());
  }
  double F = 0.0;
  for (const auto& s : stumps_) F += 0.5 * (x[s.feature] <= s.threshold ? s.left : s.right);
  return 1.0 / (1.0 + std::exp(-std::clamp(2.0 * F, -kMaxLogit, kMaxLogit)));
}

ClassProbabilities Classifier::predict_proba(FeatureRow x) const {
  if (x.size() != featureDim_) {
    throw ValidationError("predict_proba: expected " + std::to_string(featureDim_) + " features, got " +
                          std::to_string(x.size()));
  }
  const Eigen::RowVectorXd dense = x;
  const double p1 = predict_p1(dense.data());
  return {1.0 - p1, p1};
}

ClassProbabilities predict_proba(const Classifier& model, FeatureRow x) { return model.predict_proba(x); }

FeatureMatrix stack_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return FeatureMatrix(0, 0);
  const std::size_t dim = rows.front().size();
  FeatureMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw ValidationError("feature dimension mismatch at row " + std::to_string(i) + ": expected " +
                            std::to_string(dim) + ", got " + std::to_string(rows[i].size()));
    }
    for (std::size_t j = 0; j < dim; ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return out;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ValidationError("roc_auc: length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rankSumPositive = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rankSumPositive += rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) throw ValidationError("roc_auc: need both classes");
  const double np = static_cast<double>(positives);
  return (rankSumPositive - np * (np + 1.0) / 2.0) / (np * static_cast<double>(negatives));
}

LinearMap fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit_linear: length mismatch");
  if (x.size() < 2) throw ValidationError("fit_linear: need at least 2 points");
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Index>(x.size()));
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Index>(y.size()));
  const double mx = xv.mean(), my = yv.mean();
  const Eigen::VectorXd dx = xv.array() - mx;
  const double sxx = dx.squaredNorm();
  if (!(sxx > 0.0)) throw ValidationError("fit_linear: degenerate fit, all x are identical");
  LinearMap map;
  map.slope = dx.dot((yv.array() - my).matrix()) / sxx;
  map.intercept = my - map.slope * mx;
  return map;
}

}  // namespace dqest
