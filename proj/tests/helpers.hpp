#pragma once

#include "dqest/core.hpp"
#include "dqest/datasets.hpp"

#include <vector>

namespace testing_helpers {

/// Corpus with one feature per row given by `values`.
inline dqest::Corpus line_corpus(const std::vector<double>& values, const std::vector<int>& labels) {
  dqest::Corpus c;
  c.features.resize(static_cast<dqest::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) c.features(static_cast<dqest::Index>(i), 0) = values[i];
  c.labels = labels;
  for (std::size_t i = 0; i < values.size(); ++i) c.ids.push_back(std::to_string(i));
  return c;
}

/// Small, well separated two-class corpus.
inline dqest::Corpus easy_corpus(dqest::Index rows, std::uint64_t seed) {
  dqest::SyntheticDomain d;
  d.rows = rows;
  d.dim = 8;
  d.informative = 4;
  d.positiveRate = 0.4;
  d.separation = 2.5;
  return dqest::make_synthetic_corpus(d, seed);
}

/// Workers that copy the true label (so decisions are exact).
inline std::vector<dqest::WorkerDecisionSet> perfect_workers(const dqest::Corpus& corpus, int k) {
  std::vector<dqest::WorkerDecisionSet> out(static_cast<std::size_t>(k));
  for (int w = 0; w < k; ++w) out[static_cast<std::size_t>(w)].id = w;
  for (dqest::Index i = 0; i < corpus.size(); ++i) {
    auto& w = out[static_cast<std::size_t>(i % k)];
    w.records.push_back({i, corpus.labels[static_cast<std::size_t>(i)], false});
  }
  return out;
}

}  // namespace testing_helpers
