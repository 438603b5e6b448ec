#include "dqest/simharness.hpp"
#include "dqest/baselines.hpp"
#include "dqest/datasets.hpp"
#include "dqest/dq.hpp"
#include "dqest/exclusive.hpp"
#include "dqest/log.hpp"
#include "dqest/stats.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace dqest {

WorkerProfile even_profile(std::string name, int count, double lo, double hi) {
  if (count < 1) throw ConfigError("profile needs at least one worker");
  WorkerProfile p{std::move(name), {}};
  for (int k = 0; k < count; ++k) {
    const double g = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
    p.accuracies.push_back(std::round(g * 1e6) / 1e6);
  }
  return p;
}

WorkerProfile low_quality_profile() { return even_profile("low", 20, 0.61, 0.80); }
WorkerProfile high_quality_profile() { return even_profile("high", 20, 0.76, 0.95); }

void validate(const WorkerProfile& profile) {
  if (profile.accuracies.size() < 2) throw ConfigError("profile needs at least 2 workers");
  for (double g : profile.accuracies) {
    if (!(g > 0.5 && g <= 1.0)) throw ConfigError("profile accuracy " + std::to_string(g) + " outside (0.5, 1]");
  }
}

namespace {

std::vector<std::vector<Index>> cohort_shares(const Corpus& corpus, std::size_t k, Rng& rng,
                                              const std::vector<Index>* instances) {
  const Index size = instances ? static_cast<Index>(instances->size()) : corpus.size();
  auto parts = partition_workers(size, static_cast<int>(k), rng);
  if (instances) {
    for (auto& part : parts) {
      for (auto& i : part) i = (*instances)[static_cast<std::size_t>(i)];
    }
  }
  return parts;
}

template <class ErrorRate>
std::vector<WorkerDecisionSet> flip_cohort(const Corpus& corpus, const WorkerProfile& profile, Rng& rng,
                                           const std::vector<Index>* instances, ErrorRate&& errorRate) {
  validate(profile);
  const auto parts = cohort_shares(corpus, profile.accuracies.size(), rng, instances);
  std::vector<WorkerDecisionSet> workers(parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    workers[k].id = static_cast<WorkerId>(k);
    workers[k].records.reserve(parts[k].size());
    for (Index i : parts[k]) {
      const int truth = corpus.labels[static_cast<std::size_t>(i)];
      const bool flip = bernoulli(rng, errorRate(k, i));
      workers[k].records.push_back({i, flip ? 1 - truth : truth, false});
    }
  }
  return workers;
}

}  // namespace

std::vector<WorkerDecisionSet> simulate_cohort(const Corpus& corpus, const WorkerProfile& profile, Rng& rng,
                                               const std::vector<Index>* instances) {
  return flip_cohort(corpus, profile, rng, instances,
                     [&](std::size_t k, Index) { return 1.0 - profile.accuracies[k]; });
}

RegionRates region_error_rates(double g, double hardFraction, double extraError) {
  if (!(hardFraction > 0.0 && hardFraction < 1.0)) throw ConfigError("hard-region fraction must lie in (0, 1)");
  const double e = 1.0 - g;
  RegionRates r;
  r.hard = std::min(e + extraError, 1.0);
  const double easy = (e - hardFraction * r.hard) / (1.0 - hardFraction);
  r.easy = std::clamp(easy, 0.0, 1.0);
  // Without clipping the rates reproduce e exactly up to rounding.
  r.residual = easy >= 0.0 && easy <= 1.0 ? 0.0 : std::fabs(e - (hardFraction * r.hard + (1.0 - hardFraction) * r.easy));
  if (easy < 0.0 && r.residual > 0.01) {
    throw ConfigError("correlated errors: accuracy " + std::to_string(g) + " cannot keep its overall rate (residual " +
                      std::to_string(r.residual) + ")");
  }
  if (r.residual > 0.0) warn("correlated errors: clipping moves the overall error rate by " + std::to_string(r.residual));
  return r;
}

std::vector<WorkerDecisionSet> simulate_correlated(const Corpus& corpus, const WorkerProfile& profile,
                                                   const CorrelatedErrors& correlated, Rng& rng,
                                                   const std::vector<Index>* instances) {
  validate(profile);
  const Index feature = correlated.featureIndex >= 0 ? correlated.featureIndex : highest_variance_feature(corpus);
  const Threshold threshold = percentile_threshold(corpus, feature, correlated.percentile);
  if (threshold.hardCount == 0) throw ConfigError("correlated errors: hard region is empty");
  const double f = static_cast<double>(threshold.hardCount) / static_cast<double>(corpus.size());
  std::vector<RegionRates> rates;
  for (double g : profile.accuracies) rates.push_back(region_error_rates(g, f, correlated.extraError));
  return flip_cohort(corpus, profile, rng, instances, [&](std::size_t k, Index i) {
    return corpus.features(i, feature) > threshold.value ? rates[k].hard : rates[k].easy;
  });
}

const char* to_string(Method method) {
  switch (method) {
    case Method::Ear: return "EAR";
    case Method::Mde: return "MDE";
    case Method::MdeHyb: return "MDE-HYB";
    case Method::GmGt: return "GM-GT";
    case Method::GmAll: return "GM-ALL";
    case Method::MdeExc: return "MDE-EXC";
    case Method::MdeGmAll: return "MDE-GM-ALL";
    case Method::MdeSmGt: return "MDE-SM-GT";
  }
  return "?";
}

std::vector<Method> all_methods() {
  return {Method::Ear, Method::Mde, Method::MdeHyb, Method::GmGt,
          Method::GmAll, Method::MdeExc, Method::MdeGmAll, Method::MdeSmGt};
}

Method parse_method(const std::string& name) {
  std::string upper;
  for (char c : name) upper += c == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Method m : all_methods()) {
    if (upper == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

void validate(const ExperimentConfig& config) {
  validate(config.profile);
  validate(config.learner);
  validate(config.mde);
  validate(config.hyb);
  if (config.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (config.budgets.empty()) throw ConfigError("budget list is empty");
  for (int b : config.budgets) {
    if (b < 1) throw ConfigError("budgets must be >= 1, got " + std::to_string(b));
  }
  if (config.methods.empty()) throw ConfigError("method list is empty");
  if (config.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (config.correlated) {
    if (!(config.correlated->percentile > 0.0 && config.correlated->percentile < 1.0)) {
      throw ConfigError("correlated percentile must lie in (0, 1)");
    }
    if (config.correlated->extraError < 0.0) throw ConfigError("correlated extra error must be >= 0");
  }
}

const CellResult& ExperimentResult::cell(Method method, int budget) const {
  for (const auto& c : cells) {
    if (c.method == method && c.budget == budget) return c;
  }
  throw ValidationError(std::string("no result for ") + to_string(method) + " at budget " + std::to_string(budget));
}

bool ExperimentResult::has(Method method, int budget) const {
  return std::any_of(cells.begin(), cells.end(), [&](const CellResult& c) { return c.method == method && c.budget == budget; });
}

double mae(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size()) throw ValidationError("mae: lists differ in length");
  if (estimates.empty()) throw ValidationError("mae: empty lists");
  double sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) sum += std::fabs(estimates[i] - truths[i]);
  return sum / static_cast<double>(estimates.size());
}

namespace {

constexpr double kSkipped = std::numeric_limits<double>::quiet_NaN();

struct RepetitionOutput {
  std::vector<std::vector<double>> mae;  // [method][budget]
  std::vector<std::vector<int>> branch;  // [method][budget], -1 when not a hybrid
};

bool contains(const std::vector<Method>& methods, Method m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::size_t method_slot(const std::vector<Method>& methods, Method m) {
  return static_cast<std::size_t>(std::find(methods.begin(), methods.end(), m) - methods.begin());
}

std::vector<double> cohort_truths(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers,
                                  const ExperimentConfig& config) {
  std::vector<double> truths;
  for (std::size_t k = 0; k < workers.size(); ++k) {
    truths.push_back(config.truth == TruthDefinition::Generative ? config.profile.accuracies[k]
                                                                 : realized_accuracy(corpus, workers[k]));
  }
  return truths;
}

std::vector<WorkerDecisionSet> make_cohort(const Corpus& corpus, const ExperimentConfig& config, Rng& rng,
                                           const std::vector<Index>* instances) {
  return config.correlated ? simulate_correlated(corpus, config.profile, *config.correlated, rng, instances)
                           : simulate_cohort(corpus, config.profile, rng, instances);
}

std::size_t clamp_budget(int budget, std::size_t n) { return std::min(static_cast<std::size_t>(budget), n); }

RepetitionOutput run_repetition(const Corpus& corpus, const ExperimentConfig& config, int rep) {
  const auto& methods = config.methods;
  const std::uint64_t repSeed = derive_seed(config.masterSeed, "repetition", static_cast<std::uint64_t>(rep));
  RepetitionOutput out;
  out.mae.assign(methods.size(), std::vector<double>(config.budgets.size(), kSkipped));
  out.branch.assign(methods.size(), std::vector<int>(config.budgets.size(), -1));

  auto record = [&](Method m, std::size_t j, const std::vector<double>& estimates, const std::vector<double>& truths) {
    out.mae[method_slot(methods, m)][j] = mae(estimates, truths);
  };
  auto record_hybrid = [&](Method m, std::size_t j, const HybResult& r, const std::vector<double>& truths) {
    record(m, j, r.hyb, truths);
    out.branch[method_slot(methods, m)][j] = static_cast<int>(r.decision.branch);
  };

  const bool regular = std::any_of(methods.begin(), methods.end(), [](Method m) { return m != Method::MdeExc; });
  if (regular) {
    Rng cohortRng = make_rng(repSeed, "cohort");
    const auto cohort = make_cohort(corpus, config, cohortRng, nullptr);
    const auto truths = cohort_truths(corpus, cohort, config);

    for (std::size_t j = 0; j < config.budgets.size(); ++j) {
      const int budget = config.budgets[j];
      const auto b = static_cast<std::uint64_t>(budget);
      Rng gtRng = make_rng(repSeed, "ground-truth", b);
      std::vector<WorkerDecisionSet> workers;
      for (const auto& w : cohort) workers.push_back(sample_ground_truth(w, clamp_budget(budget, w.n()), gtRng));
      const GroundTruthPool pool = pool_from_workers(corpus, workers);

      ClassifierConfig learner = config.learner;
      learner.seed = derive_seed(repSeed, "learner", b);
      MdeConfig mdeConfig = config.mde;
      mdeConfig.seed = derive_seed(repSeed, "mde", b);
      HybConfig hybConfig = config.hyb;
      hybConfig.seed = derive_seed(repSeed, "hyb", b);

      if (contains(methods, Method::Ear)) {
        std::vector<double> ear;
        for (const auto& w : workers) ear.push_back(ear_estimate(corpus, w));
        record(Method::Ear, j, ear, truths);
      }
      if (contains(methods, Method::Mde) || contains(methods, Method::MdeHyb)) {
        const MdeModel model = fit_mde(train_bank(corpus, workers, learner, BankMode::Ensemble), corpus, workers,
                                       pool, mdeConfig);
        if (contains(methods, Method::MdeHyb)) {
          const HybResult r = mde_hyb(corpus, workers, pool, model, hybConfig);
          record_hybrid(Method::MdeHyb, j, r, truths);
          if (contains(methods, Method::Mde)) record(Method::Mde, j, r.mde, truths);
        } else {
          record(Method::Mde, j, assess_workers(model, workers), truths);
        }
      }
      // The global banks serve both the plain baseline and the MDE variant.
      const std::pair<BankMode, std::pair<Method, Method>> globals[] = {
          {BankMode::GlobalGt, {Method::GmGt, Method::MdeSmGt}},
          {BankMode::GlobalAll, {Method::GmAll, Method::MdeGmAll}},
      };
      for (const auto& [mode, pair] : globals) {
        const auto [baseline, variant] = pair;
        if (!contains(methods, baseline) && !contains(methods, variant)) continue;
        BaseModelBank bank = train_bank(corpus, workers, learner, mode);
        if (contains(methods, baseline)) record(baseline, j, global_model_agreement(corpus, workers, bank.model(0)), truths);
        if (contains(methods, variant)) {
          MdeConfig variantConfig = mdeConfig;
          variantConfig.bankMode = mode;
          const MdeModel model = fit_mde(std::move(bank), corpus, workers, pool, variantConfig);
          record_hybrid(variant, j, mde_hyb(corpus, workers, pool, model, hybConfig), truths);
        }
      }
    }
  }

  if (contains(methods, Method::MdeExc)) {
    const std::size_t k = config.profile.accuracies.size();
    const int maxBudget = *std::max_element(config.budgets.begin(), config.budgets.end());
    const std::size_t holdout = k * static_cast<std::size_t>(maxBudget);
    if (holdout + k > static_cast<std::size_t>(corpus.size())) {
      throw ConfigError("exclusive ground truth of " + std::to_string(holdout) + " instances leaves no worker data");
    }
    Rng splitRng = make_rng(repSeed, "exclusive-split");
    std::vector<Index> order(static_cast<std::size_t>(corpus.size()));
    std::iota(order.begin(), order.end(), Index{0});
    shuffle(std::span<Index>(order), splitRng);
    const std::vector<Index> held(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(holdout));
    const std::vector<Index> rest(order.begin() + static_cast<std::ptrdiff_t>(holdout), order.end());

    Rng cohortRng = make_rng(repSeed, "exclusive-cohort");
    const auto workers = make_cohort(corpus, config, cohortRng, &rest);
    const auto truths = cohort_truths(corpus, workers, config);
    for (std::size_t j = 0; j < config.budgets.size(); ++j) {
      const auto b = static_cast<std::uint64_t>(config.budgets[j]);
      GroundTruthPool pool;
      pool.exclusive = true;
      for (std::size_t i = 0; i < k * b; ++i) {
        pool.entries.push_back({held[i], corpus.labels[static_cast<std::size_t>(held[i])], kNoWorker});
      }
      ClassifierConfig learner = config.learner;
      learner.seed = derive_seed(repSeed, "exclusive-learner", b);
      MdeConfig mdeConfig = config.mde;
      mdeConfig.seed = derive_seed(repSeed, "exclusive-mde", b);
      Rng shareRng = make_rng(repSeed, "exclusive-share", b);
      record(Method::MdeExc, j, mde_exclusive(corpus, workers, pool, mdeConfig, learner, shareRng), truths);
    }
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const Corpus& corpus, const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t k = config.profile.accuracies.size();
  const std::size_t n = static_cast<std::size_t>(corpus.size()) / k;
  for (int b : config.budgets) {
    if (static_cast<std::size_t>(b) > n) {
      warn("budget " + std::to_string(b) + " exceeds the " + std::to_string(n) +
           " records per worker; every record is flagged");
    }
  }

  std::vector<RepetitionOutput> outputs(static_cast<std::size_t>(config.repetitions));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto work = [&] {
    for (int rep = next++; rep < config.repetitions; rep = next++) {
      try {
        outputs[static_cast<std::size_t>(rep)] = run_repetition(corpus, config, rep);
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
        next = config.repetitions;
      }
    }
  };
  const int threads = std::min(config.jobs, config.repetitions);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.config = config;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    for (std::size_t j = 0; j < config.budgets.size(); ++j) {
      CellResult cell;
      cell.method = config.methods[m];
      cell.budget = config.budgets[j];
      for (const auto& o : outputs) {
        cell.mae.push_back(o.mae[m][j]);
        if (o.branch[m][j] >= 0) ++cell.branches[static_cast<std::size_t>(o.branch[m][j])];
      }
      cell.meanMae = sample_mean(cell.mae);
      result.cells.push_back(std::move(cell));
    }
  }
  if (contains(config.methods, config.reference)) {
    const std::size_t refSlot = method_slot(config.methods, config.reference);
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      if (m == refSlot) continue;
      for (std::size_t j = 0; j < config.budgets.size(); ++j) {
        auto& cell = result.cells[m * config.budgets.size() + j];
        const auto& ref = result.cells[refSlot * config.budgets.size() + j];
        cell.compared = true;
        cell.improvement = cell.meanMae > 0.0 ? (cell.meanMae - ref.meanMae) / cell.meanMae : 0.0;
        if (config.repetitions >= 2) {
          cell.pValue = paired_t_test(ref.mae, cell.mae).pValue;
          cell.stars = cell.pValue < 0.05 ? "**" : cell.pValue < 0.1 ? "*" : "";
        }
      }
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace dqest
