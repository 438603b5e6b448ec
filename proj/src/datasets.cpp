#include "dqest/datasets.hpp"
#include "dqest/log.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace dqest {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Corpus parse_csv_corpus(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ParseError(lineNo, "missing header");
  {
    const auto header = split_commas(line);
    if (header.size() < 2 || trim(header.back()) != "label") {
      throw ParseError(lineNo, "header must list feature columns followed by `label`");
    }
    columns = header.size();
  }

  std::vector<double> values;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != columns) {
      throw ParseError(lineNo, "expected " + std::to_string(columns) + " columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c + 1 < columns; ++c) {
      double v;
      if (!parse_double(cells[c], v)) throw ParseError(lineNo, "non-numeric value in column " + std::to_string(c));
      values.push_back(v);
    }
    double labelValue;
    if (!parse_double(cells.back(), labelValue)) throw ParseError(lineNo, "non-numeric label");
    if (labelValue != 0.0 && labelValue != 1.0) {
      throw ValidationError("row " + std::to_string(lineNo) + ": label must be 0 or 1, got " + std::string(trim(cells.back())));
    }
    labels.push_back(static_cast<int>(labelValue));
  }

  Corpus corpus;
  const auto dim = static_cast<Index>(columns - 1);
  const auto rows = static_cast<Index>(labels.size());
  corpus.features = Eigen::Map<const FeatureMatrix>(values.data(), rows, dim);
  corpus.labels = std::move(labels);
  corpus.ids.resize(corpus.labels.size());
  for (std::size_t i = 0; i < corpus.ids.size(); ++i) corpus.ids[i] = std::to_string(i);
  return corpus;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (c < 0x80 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Corpus build_bow(const std::vector<std::pair<std::string, int>>& documents, int vocabularySize) {
  if (vocabularySize < 1) throw ValidationError("build_bow: vocabularySize must be >= 1");
  if (documents.empty()) throw ValidationError("build_bow: no documents");

  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(documents.size());
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& [text, label] : documents) {
    check_binary(label, "document label");
    tokenized.push_back(tokenize(text));
    for (const auto& tok : tokenized.back()) ++counts[tok];
  }

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > static_cast<std::size_t>(vocabularySize)) ranked.resize(static_cast<std::size_t>(vocabularySize));
  std::unordered_map<std::string, Index> column;
  for (std::size_t i = 0; i < ranked.size(); ++i) column.emplace(ranked[i].first, static_cast<Index>(i));

  Corpus corpus;
  corpus.features = FeatureMatrix::Zero(static_cast<Index>(documents.size()), vocabularySize);
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (const auto& tok : tokenized[d]) {
      if (auto it = column.find(tok); it != column.end()) corpus.features(static_cast<Index>(d), it->second) = 1.0;
    }
    corpus.labels.push_back(documents[d].second);
    corpus.ids.push_back(std::to_string(d));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, int vocabularySize) {
  const std::string text = read_file(path);
  if (format == CorpusFormat::Csv) return parse_csv_corpus(text);

  std::vector<std::pair<std::string, int>> documents;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(lineNo, "expected `label<TAB>text`");
    double label;
    if (!parse_double(std::string_view(line).substr(0, tab), label)) throw ParseError(lineNo, "non-numeric label");
    if (label != 0.0 && label != 1.0) throw ValidationError("row " + std::to_string(lineNo) + ": label must be 0 or 1");
    documents.emplace_back(line.substr(tab + 1), static_cast<int>(label));
  }
  if (documents.empty()) {
    Corpus empty;
    empty.features = FeatureMatrix(0, 0);
    return empty;
  }
  return build_bow(documents, vocabularySize);
}

std::vector<std::vector<Index>> partition_workers(Index corpusSize, int k, Rng& rng) {
  if (k < 2) throw ValidationError("partition_workers: need at least 2 workers");
  if (static_cast<Index>(k) > corpusSize) throw ValidationError("partition_workers: more workers than instances");
  std::vector<Index> order(static_cast<std::size_t>(corpusSize));
  std::iota(order.begin(), order.end(), Index{0});
  shuffle(std::span<Index>(order), rng);
  const auto share = static_cast<std::size_t>(corpusSize / k);
  std::vector<std::vector<Index>> parts(static_cast<std::size_t>(k));
  for (std::size_t w = 0; w < parts.size(); ++w) {
    parts[w].assign(order.begin() + static_cast<std::ptrdiff_t>(w * share),
                    order.begin() + static_cast<std::ptrdiff_t>((w + 1) * share));
  }
  return parts;
}

WorkerDecisionSet sample_ground_truth(const WorkerDecisionSet& worker, std::size_t t, Rng& rng) {
  if (t < 1) throw ValidationError("sample_ground_truth: t must be >= 1");
  if (t > worker.n()) {
    throw ValidationError("sample_ground_truth: t=" + std::to_string(t) + " exceeds n=" + std::to_string(worker.n()));
  }
  WorkerDecisionSet out = worker;
  for (auto& r : out.records) r.groundTruthKnown = false;
  for (auto i : sample_without_replacement(out.n(), t, rng)) out.records[i].groundTruthKnown = true;
  return out;
}

Threshold percentile_threshold(const Corpus& corpus, Index featureIndex, double percentile) {
  if (!(percentile > 0.0 && percentile < 1.0)) throw ValidationError("percentile must be in (0, 1)");
  if (featureIndex < 0 || featureIndex >= corpus.dim()) throw ValidationError("feature index out of range");
  if (corpus.size() == 0) throw ValidationError("percentile_threshold: empty corpus");
  Eigen::VectorXd column = corpus.features.col(featureIndex);
  std::vector<double> sorted(column.data(), column.data() + column.size());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(percentile * n - 1e-12));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  Threshold out;
  out.value = sorted[rank - 1];
  out.hardCount = static_cast<std::size_t>(std::count_if(sorted.begin(), sorted.end(), [&](double v) { return v > out.value; }));
  if (sorted.front() == sorted.back()) {
    warn("feature " + std::to_string(featureIndex) + " is constant; hard region is empty");
  }
  return out;
}

Index highest_variance_feature(const Corpus& corpus) {
  if (corpus.size() < 2 || corpus.dim() < 1) throw ValidationError("highest_variance_feature: corpus too small");
  const Eigen::RowVectorXd mean = corpus.features.colwise().mean();
  const Eigen::RowVectorXd var = (corpus.features.rowwise() - mean).array().square().colwise().sum();
  Index best = 0;
  for (Index j = 1; j < var.size(); ++j) {
    if (var(j) > var(best)) best = j;
  }
  return best;
}

void write_csv_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (Index j = 0; j < corpus.dim(); ++j) out << 'f' << j << ',';
  out << "label\n";
  out.precision(17);
  for (Index i = 0; i < corpus.size(); ++i) {
    for (Index j = 0; j < corpus.dim(); ++j) out << corpus.features(i, j) << ',';
    out << corpus.labels[static_cast<std::size_t>(i)] << '\n';
  }
}

Corpus make_synthetic_corpus(const SyntheticDomain& domain, std::uint64_t seed) {
  if (domain.rows < 1 || domain.dim < 1 || domain.informative < 1 || domain.informative > domain.dim) {
    throw ValidationError("make_synthetic_corpus: invalid shape");
  }
  Rng rng = make_rng(seed, "synthetic-corpus");
  Corpus corpus;
  corpus.features.resize(domain.rows, domain.dim);
  corpus.labels.resize(static_cast<std::size_t>(domain.rows));
  corpus.ids.resize(static_cast<std::size_t>(domain.rows));

  // Informative columns get decreasing weights so that a few features
  // dominate, as in word-frequency data.
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(domain.dim);
  for (Index j = 0; j < domain.informative; ++j) {
    weight(j) = 1.5 - static_cast<double>(j) / static_cast<double>(domain.informative);
  }

  for (Index i = 0; i < domain.rows; ++i) {
    const int y = bernoulli(rng, domain.positiveRate) ? 1 : 0;
    const double sign = y == 1 ? 0.5 : -0.5;
    for (Index j = 0; j < domain.dim; ++j) {
      const double z = standard_normal(rng) + sign * domain.separation * weight(j);
      corpus.features(i, j) = j == 0 ? std::exp(z) : z;
    }
    const bool flip = domain.labelNoise > 0.0 && bernoulli(rng, domain.labelNoise);
    corpus.labels[static_cast<std::size_t>(i)] = flip ? 1 - y : y;
    corpus.ids[static_cast<std::size_t>(i)] = std::to_string(i);
  }
  return corpus;
}

SyntheticDomain spam_like_domain() {
  SyntheticDomain d;
  d.separation = 0.75;
  return d;
}

SyntheticDomain low_predictability_domain() {
  SyntheticDomain d;
  d.rows = 6000;
  d.dim = 30;
  d.informative = 10;
  d.positiveRate = 0.5;
  d.separation = 0.43;
  d.labelNoise = 0.2;
  return d;
}

SyntheticDomain review_like_domain() {
  SyntheticDomain d;
  d.rows = 10000;
  d.dim = 40;
  d.informative = 15;
  d.positiveRate = 0.874;
  d.separation = 0.8;
  return d;
}

}  // namespace dqest
