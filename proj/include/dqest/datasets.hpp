#pragma once

#include "dqest/core.hpp"
#include "dqest/rng.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dqest {

enum class CorpusFormat {
  Csv,   ///< header `f0..f{D-1},label`, one instance per row
  Text,  ///< `label<TAB>text` per line, turned into a binary bag of words
};

/// Loads a corpus in file order. Text corpora are vectorized with build_bow.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, int vocabularySize = 2000);

/// Parses CSV corpus text (same rules as load_corpus on a CSV file).
Corpus parse_csv_corpus(const std::string& text);

/// Binary presence features over the `vocabularySize` most frequent tokens.
/// A token is a maximal run of ASCII alphanumerics, lowercased; frequency ties
/// are broken lexicographically.
Corpus build_bow(const std::vector<std::pair<std::string, int>>& documents, int vocabularySize);

std::vector<std::string> tokenize(const std::string& text);

/// Random partition into k equal-sized disjoint subsets of instance indices.
/// The |corpus| mod k remainder instances are left unassigned.
std::vector<std::vector<Index>> partition_workers(Index corpusSize, int k, Rng& rng);

/// Copy of `worker` with exactly t records flagged as ground truth, drawn
/// uniformly without replacement. Earlier flags are cleared.
WorkerDecisionSet sample_ground_truth(const WorkerDecisionSet& worker, std::size_t t, Rng& rng);

struct Threshold {
  double value = 0.0;
  std::size_t hardCount = 0;  ///< instances with value strictly above the threshold
};

/// Nearest-rank empirical quantile of one feature column. A constant column
/// produces a warning and an empty hard region.
Threshold percentile_threshold(const Corpus& corpus, Index featureIndex, double percentile);

/// Column with the largest sample variance (lowest index on ties).
Index highest_variance_feature(const Corpus& corpus);

void write_csv_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Parameters of a generated two-class domain. Informative columns carry a
/// class-dependent shift of `separation` standard deviations; the first
/// column is a skewed, frequency-like feature. Labels are flipped with
/// probability `labelNoise` after the features are drawn.
struct SyntheticDomain {
  Index rows = 4601;
  Index dim = 57;
  Index informative = 20;
  double positiveRate = 0.394;
  double separation = 1.0;
  double labelNoise = 0.0;
};

Corpus make_synthetic_corpus(const SyntheticDomain& domain, std::uint64_t seed);

/// Stand-in for the UCI Spambase domain: 4601 x 57, high predictability.
SyntheticDomain spam_like_domain();
/// Low-predictability domain with injected label noise (forest AUC near 0.67).
SyntheticDomain low_predictability_domain();
/// Review-sentiment style domain with the skewed 87.4% / 12.6% class prior.
SyntheticDomain review_like_domain();

}  // namespace dqest
