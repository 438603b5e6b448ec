#include "dqest/config.hpp"
#include "dqest/datasets.hpp"
#include "dqest/log.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dqest {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof()) throw ConfigError("key '" + key + "': cannot parse '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + value + "'");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineNo) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ConfigError("line " + std::to_string(lineNo) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<int>("list", item));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<double>("list", item));
  return out;
}

std::vector<Method> parse_method_list(const std::string& text) {
  std::vector<Method> out;
  for (const auto& item : split_list(text)) {
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

BenchConfig apply_config(const std::map<std::string, std::string>& values, BenchConfig base) {
  auto& e = base.experiment;
  int workers = -1;
  double lo = -1.0, hi = -1.0;
  for (const auto& [key, value] : values) {
    if (key == "corpus") e.corpusTag = value;
    else if (key == "corpus_seed") base.corpusSeed = parse_number<std::uint64_t>(key, value);
    else if (key == "profile") {
      if (value == "low") e.profile = low_quality_profile();
      else if (value == "high") e.profile = high_quality_profile();
      else throw ConfigError("key 'profile': expected low or high, got '" + value + "'");
    }
    else if (key == "workers") workers = parse_number<int>(key, value);
    else if (key == "accuracy_min") lo = parse_number<double>(key, value);
    else if (key == "accuracy_max") hi = parse_number<double>(key, value);
    else if (key == "accuracies") e.profile = {"custom", parse_double_list(value)};
    else if (key == "budgets") e.budgets = parse_int_list(value);
    else if (key == "repetitions") e.repetitions = parse_number<int>(key, value);
    else if (key == "methods") e.methods = parse_method_list(value);
    else if (key == "reference") e.reference = parse_method(value);
    else if (key == "learner") {
      if (value == "forest") e.learner.algorithm = Algorithm::Forest;
      else if (value == "logitboost") e.learner.algorithm = Algorithm::LogitBoost;
      else throw ConfigError("key 'learner': expected forest or logitboost, got '" + value + "'");
    }
    else if (key == "trees") e.learner.treeCount = parse_number<int>(key, value);
    else if (key == "max_depth") e.learner.maxDepth = parse_number<int>(key, value);
    else if (key == "min_leaf") e.learner.minLeafSize = parse_number<int>(key, value);
    else if (key == "boosting_rounds") e.learner.boostingRounds = parse_number<int>(key, value);
    else if (key == "mde.replicates") e.mde.replicates = parse_number<int>(key, value);
    else if (key == "mde.synthetic_workers") e.mde.syntheticWorkers = parse_number<int>(key, value);
    else if (key == "mde.step") e.mde.step = parse_number<double>(key, value);
    else if (key == "hyb.d") e.hyb.d = parse_number<double>(key, value);
    else if (key == "hyb.alpha") e.hyb.alpha = parse_number<double>(key, value);
    else if (key == "hyb.samples") e.hyb.samples = parse_number<int>(key, value);
    else if (key == "hyb.workers_per_sample") e.hyb.workersPerSample = parse_number<int>(key, value);
    else if (key == "hyb.ci_alpha") e.hyb.ciAlpha = parse_number<double>(key, value);
    else if (key == "hyb.sample_fraction") e.hyb.sampleFraction = parse_number<double>(key, value);
    else if (key == "hyb.literal_flip") e.hyb.literalFlipProbability = parse_bool(key, value);
    else if (key == "hyb.swap_blend_weights") e.hyb.swapBlendWeights = parse_bool(key, value);
    else if (key == "correlated") {
      if (parse_bool(key, value)) {
        if (!e.correlated) e.correlated = CorrelatedErrors{};
      } else {
        e.correlated.reset();
      }
    }
    else if (key == "correlated.feature" || key == "correlated.percentile" || key == "correlated.extra_error") {
      if (!e.correlated) e.correlated = CorrelatedErrors{};
      if (key == "correlated.feature") e.correlated->featureIndex = parse_number<Index>(key, value);
      else if (key == "correlated.percentile") e.correlated->percentile = parse_number<double>(key, value);
      else e.correlated->extraError = parse_number<double>(key, value);
    }
    else if (key == "truth") {
      if (value == "generative") e.truth = TruthDefinition::Generative;
      else if (value == "realized") e.truth = TruthDefinition::Realized;
      else throw ConfigError("key 'truth': expected generative or realized, got '" + value + "'");
    }
    else if (key == "seed") e.masterSeed = parse_number<std::uint64_t>(key, value);
    else if (key == "jobs") e.jobs = parse_number<int>(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  if (workers > 0 || lo >= 0.0 || hi >= 0.0) {
    if (workers <= 0 || lo < 0.0 || hi < 0.0) {
      throw ConfigError("keys 'workers', 'accuracy_min' and 'accuracy_max' must be given together");
    }
    e.profile = even_profile("even", workers, lo, hi);
  }
  if (e.correlated && values.contains("correlated") && !parse_bool("correlated", values.at("correlated"))) {
    e.correlated.reset();
  }
  return base;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return apply_config(parse_key_values(buffer.str()));
}

std::string format_config(const BenchConfig& config) {
  const auto& e = config.experiment;
  std::ostringstream out;
  std::vector<std::string> items;
  out << "corpus = " << e.corpusTag << "\n";
  out << "corpus_seed = " << config.corpusSeed << "\n";
  for (double g : e.profile.accuracies) items.push_back(fmt(g));
  out << "accuracies = " << join(items) << "\n";
  items.clear();
  for (int b : e.budgets) items.push_back(std::to_string(b));
  out << "budgets = " << join(items) << "\n";
  out << "repetitions = " << e.repetitions << "\n";
  items.clear();
  for (Method m : e.methods) items.push_back(to_string(m));
  out << "methods = " << join(items) << "\n";
  out << "reference = " << to_string(e.reference) << "\n";
  out << "learner = " << (e.learner.algorithm == Algorithm::Forest ? "forest" : "logitboost") << "\n";
  out << "trees = " << e.learner.treeCount << "\n";
  out << "max_depth = " << e.learner.maxDepth << "\n";
  out << "min_leaf = " << e.learner.minLeafSize << "\n";
  out << "boosting_rounds = " << e.learner.boostingRounds << "\n";
  out << "mde.replicates = " << e.mde.replicates << "\n";
  out << "mde.synthetic_workers = " << e.mde.syntheticWorkers << "\n";
  out << "mde.step = " << fmt(e.mde.step) << "\n";
  out << "hyb.d = " << fmt(e.hyb.d) << "\n";
  out << "hyb.alpha = " << fmt(e.hyb.alpha) << "\n";
  out << "hyb.samples = " << e.hyb.samples << "\n";
  out << "hyb.workers_per_sample = " << e.hyb.workersPerSample << "\n";
  out << "hyb.ci_alpha = " << fmt(e.hyb.ciAlpha) << "\n";
  out << "hyb.sample_fraction = " << fmt(e.hyb.sampleFraction) << "\n";
  out << "hyb.literal_flip = " << (e.hyb.literalFlipProbability ? "true" : "false") << "\n";
  out << "hyb.swap_blend_weights = " << (e.hyb.swapBlendWeights ? "true" : "false") << "\n";
  out << "correlated = " << (e.correlated ? "true" : "false") << "\n";
  if (e.correlated) {
    out << "correlated.feature = " << e.correlated->featureIndex << "\n";
    out << "correlated.percentile = " << fmt(e.correlated->percentile) << "\n";
    out << "correlated.extra_error = " << fmt(e.correlated->extraError) << "\n";
  }
  out << "truth = " << (e.truth == TruthDefinition::Generative ? "generative" : "realized") << "\n";
  out << "seed = " << e.masterSeed << "\n";
  out << "jobs = " << e.jobs << "\n";
  return out.str();
}

Corpus resolve_corpus(const std::string& tag, std::uint64_t seed) {
  if (tag == "spam") {
    if (const char* path = std::getenv("DQEST_SPAMBASE"); path && *path) {
      std::ifstream in(path);
      if (!in) throw ConfigError(std::string("DQEST_SPAMBASE: cannot open ") + path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      std::string text = buffer.str();
      const auto firstComma = text.find(',');
      const bool headerless = !text.empty() && (std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '.');
      if (headerless && firstComma != std::string::npos) {
        const std::string firstLine = text.substr(0, text.find('\n'));
        const auto columns = static_cast<int>(std::count(firstLine.begin(), firstLine.end(), ',')) + 1;
        std::string header;
        for (int c = 0; c + 1 < columns; ++c) header += "f" + std::to_string(c) + ",";
        text = header + "label\n" + text;
      }
      return parse_csv_corpus(text);
    }
    return make_synthetic_corpus(spam_like_domain(), seed);
  }
  if (tag == "low-predictability") return make_synthetic_corpus(low_predictability_domain(), seed);
  if (tag == "review") return make_synthetic_corpus(review_like_domain(), seed);
  if (tag == "amt") {
    SyntheticDomain domain = review_like_domain();
    domain.rows = 40 * 200;
    return make_synthetic_corpus(domain, seed);
  }
  if (tag.starts_with("csv:")) return load_corpus(tag.substr(4), CorpusFormat::Csv);
  if (tag.starts_with("text:")) return load_corpus(tag.substr(5), CorpusFormat::Text);
  throw ConfigError("unknown corpus '" + tag + "'");
}

}  // namespace dqest
