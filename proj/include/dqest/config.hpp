#pragma once

#include "dqest/core.hpp"
#include "dqest/simharness.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace dqest {

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
/// Duplicate keys and lines without `=` raise ConfigError.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies the recognized keys on top of `base`. Unknown keys raise a
/// ConfigError naming the key.
///
/// Keys: corpus, corpus_seed, profile (low|high), workers, accuracy_min,
/// accuracy_max, accuracies, budgets, repetitions, methods, reference,
/// learner (forest|logitboost), trees, max_depth, min_leaf, boosting_rounds,
/// mde.replicates, mde.synthetic_workers, mde.step, hyb.d, hyb.alpha,
/// hyb.samples, hyb.workers_per_sample, hyb.ci_alpha, hyb.sample_fraction,
/// hyb.literal_flip, hyb.swap_blend_weights, correlated, correlated.feature, correlated.percentile,
/// correlated.extra_error, truth (generative|realized), seed, jobs.
struct BenchConfig {
  ExperimentConfig experiment;
  std::uint64_t corpusSeed = 20240101;
};

BenchConfig apply_config(const std::map<std::string, std::string>& values, BenchConfig base = {});
BenchConfig load_bench_config(const std::filesystem::path& path);

/// Inverse of apply_config: every key, in a fixed order.
std::string format_config(const BenchConfig& config);

std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<Method> parse_method_list(const std::string& text);

/// Corpus for a tag: spam, low-predictability, review, amt, csv:<path>,
/// text:<path>. `spam` reads the file named by DQEST_SPAMBASE when set
/// (raw UCI layout or headered CSV) and otherwise builds the synthetic
/// stand-in.
Corpus resolve_corpus(const std::string& tag, std::uint64_t seed);

}  // namespace dqest
