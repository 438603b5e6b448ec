// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Optional arguments select criteria by id (c1 .. c10, lowpred).

#include "dqest/config.hpp"
#include "dqest/dq.hpp"
#include "dqest/log.hpp"
#include "dqest/mde.hpp"
#include "dqest/simharness.hpp"
#include "dqest/stats.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace dqest;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

// Cells feeding the robustness criterion.
struct RobustCell {
  std::string label;
  int budget;
  double hyb, mde, ear;
};
std::vector<RobustCell> robustCells;

void collect_robust(const std::string& label, const ExperimentResult& r) {
  for (int b : r.config.budgets) {
    if (r.has(Method::MdeHyb, b) && r.has(Method::Mde, b) && r.has(Method::Ear, b)) {
      robustCells.push_back({label, b, r.cell(Method::MdeHyb, b).meanMae, r.cell(Method::Mde, b).meanMae,
                             r.cell(Method::Ear, b).meanMae});
    }
  }
}

void print_summary(const std::string& label, const ExperimentResult& r) {
  std::cout << "  [" << label << "] " << fmt(r.seconds, 1) << " s\n";
  for (const auto& c : r.cells) {
    std::cout << "    " << to_string(c.method) << " b=" << c.budget << " mae=" << fmt(c.meanMae) << "\n";
  }
  std::cout.flush();
}

ExperimentConfig spam_config() {
  ExperimentConfig c;
  c.corpusTag = "spam";
  c.profile = low_quality_profile();
  c.budgets = {5, 10, 15, 20, 25, 30, 50, 100};
  c.repetitions = 50;
  c.methods = {Method::MdeHyb, Method::Ear, Method::Mde};
  c.reference = Method::MdeHyb;
  return c;
}

double hyb_forest_b5 = std::numeric_limits<double>::quiet_NaN();

void criterion1(const Corpus& spam) {
  ExperimentConfig c;
  c.profile = {"g07", {0.7, 0.7}};
  c.budgets = {5};
  c.repetitions = 4000;
  c.methods = {Method::Ear};
  c.reference = Method::Ear;
  const auto start = Clock::now();
  const ExperimentResult r = run_experiment(spam, c);
  const double elapsed = seconds_since(start);
  const double mean = r.cell(Method::Ear, 5).meanMae;
  const double target = oracle::binomial_mad(5, 0.7);
  report("c1 EAR oracle", std::fabs(mean - target) <= 0.01 && elapsed < 10.0,
         "mean |q_EAR - 0.7| = " + fmt(mean) + " vs exact " + fmt(target) + " (tol 0.01), " +
             std::to_string(c.repetitions) + " reps in " + fmt(elapsed, 2) + " s (< 10 s)");
}

void criterion2(const Corpus& spam) {
  const auto start = Clock::now();
  GroundTruthPool pool;
  for (Index i = 0; i < 200; ++i) pool.entries.push_back({i, spam.labels[static_cast<std::size_t>(i)], kNoWorker});
  MdeConfig config;
  Rng rng = make_rng(2, "synthetic-exactness");
  double worst = 0.0;
  for (int n = 0; n < config.syntheticWorkers; ++n) {
    const double q = synthetic_accuracy(config, n);
    const SyntheticWorker w = make_synthetic_worker(pool, q, rng);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < w.records.size(); ++i) correct += w.records[i].decision == pool.entries[i].label;
    worst = std::max(worst, std::fabs(static_cast<double>(correct) / 200.0 - q));
  }
  const double elapsed = seconds_since(start);
  report("c2 synthetic exactness", worst <= 1.0 / 400.0 + 1e-12 && elapsed < 1.0,
         "max |accuracy - q| = " + fmt(worst, 5) + " over " + std::to_string(config.syntheticWorkers) +
             " grid points (tol 0.0025), " + fmt(elapsed, 3) + " s (< 1 s)");
}

void criterion3(const Corpus& spam) {
  const ExperimentConfig c = spam_config();
  const ExperimentResult r = run_experiment(spam, c);
  print_summary("spam low forest", r);
  collect_robust("spam/low", r);

  const double hyb = r.cell(Method::MdeHyb, 5).meanMae;
  const double ear = r.cell(Method::Ear, 5).meanMae;
  hyb_forest_b5 = hyb;
  report("c3a spam MDE-HYB at budget 5", hyb <= 0.05, "MAE " + fmt(hyb) + " (<= 0.05)");
  report("c3b spam MDE-HYB vs EAR at budget 5", hyb <= 0.5 * ear,
         "MDE-HYB " + fmt(hyb) + " <= 0.5 x EAR " + fmt(ear) + " (improvement " + fmt(100.0 * (ear - hyb) / ear, 1) + "%)");

  double worst = 0.0;
  int worstBudget = 0;
  for (int b : c.budgets) {
    double target = 0.0;
    for (double g : c.profile.accuracies) target += oracle::binomial_mad(b, g);
    target /= static_cast<double>(c.profile.accuracies.size());
    const double gap = std::fabs(r.cell(Method::Ear, b).meanMae - target);
    if (gap >= worst) {
      worst = gap;
      worstBudget = b;
    }
  }
  report("c3c spam EAR vs binomial oracle", worst <= 0.02,
         "max |EAR MAE - oracle| = " + fmt(worst) + " at budget " + std::to_string(worstBudget) + " (tol 0.02)");

  ExperimentConfig gm = c;
  gm.budgets = {5};
  gm.methods = {Method::GmAll};
  gm.reference = Method::GmAll;
  const ExperimentResult g = run_experiment(spam, gm);
  print_summary("spam low GM-ALL", g);
  const double gmAll = g.cell(Method::GmAll, 5).meanMae;
  report("c3d spam GM-ALL at budget 5", gmAll >= 0.15, "MAE " + fmt(gmAll) + " (>= 0.15)");
}

void criterion4(const Corpus& spam) {
  ExperimentConfig c = spam_config();
  // Larger than every worker's record count: all records are flagged.
  c.budgets = {static_cast<int>(spam.size())};
  c.repetitions = 20;
  const ExperimentResult r = run_experiment(spam, c);
  print_summary("spam all flagged", r);
  collect_robust("spam/all-flagged", r);
  const int b = c.budgets.front();
  const double hyb = r.cell(Method::MdeHyb, b).meanMae;
  const double ear = r.cell(Method::Ear, b).meanMae;
  report("c4 large-budget convergence", std::fabs(hyb - ear) <= 0.005,
         "all records flagged: MDE-HYB " + fmt(hyb) + ", EAR " + fmt(ear) + ", gap " + fmt(std::fabs(hyb - ear)) +
             " (<= 0.005)");
}

void criterion6(const Corpus& spam) {
  double worst = 1.0, sum = 0.0, worstVsG = 1.0;
  const WorkerProfile profile = high_quality_profile();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng = make_rng(seed, "dq-ranking");
    const auto workers = simulate_cohort(spam, profile, rng);
    ClassifierConfig learner;
    learner.seed = derive_seed(seed, "learner");
    const BaseModelBank bank = train_bank(spam, workers, learner, BankMode::Ensemble);
    std::vector<Index> instances;
    for (const auto& w : workers) {
      for (const auto& r : w.records) instances.push_back(r.instance);
    }
    const EnsembleCache cache(bank, spam, instances);
    std::vector<double> dq, realized;
    for (const auto& w : workers) {
      dq.push_back(dq_score(scored_decisions(w), cache));
      realized.push_back(realized_accuracy(spam, w));
    }
    const double rho = oracle::spearman(dq, realized);
    worst = std::min(worst, rho);
    worstVsG = std::min(worstVsG, oracle::spearman(dq, profile.accuracies));
    sum += rho;
  }
  report("c6 DQ ranking", worst >= 0.9,
         "Spearman(DQ, realized accuracy) min " + fmt(worst) + ", mean " + fmt(sum / 10.0) +
             " over 10 seeds (>= 0.9); min vs generative accuracy " + fmt(worstVsG));
}

void criterion7() {
  double worstCdf = 0.0, worstQuantile = 0.0;
  for (double df : {1.0, 2.0, 3.5, 5.0, 9.0, 19.0, 30.0, 60.0, 120.0, 198.0}) {
    for (double x = -6.0; x <= 6.0; x += 0.25) {
      worstCdf = std::max(worstCdf, std::fabs(t_cdf(x, df) - oracle::t_cdf(x, df)));
    }
    for (double p : {0.005, 0.01, 0.025, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.975, 0.99, 0.995}) {
      worstQuantile = std::max(worstQuantile, std::fabs(oracle::t_cdf(t_quantile(p, df), df) - p));
    }
  }
  report("c7a t distribution", worstCdf <= 1e-6 && worstQuantile <= 1e-6,
         "max cdf error " + sci(worstCdf) + ", max quantile round-trip error " + sci(worstQuantile) + " (<= 1e-6)");

  Rng rng = make_rng(7, "mutual-exclusion");
  int both = 0;
  const double d = 0.01, alpha = 0.02;
  for (int pair = 0; pair < 10000; ++pair) {
    const std::size_t na = 2 + uniform_index(rng, 30), nb = 2 + uniform_index(rng, 30);
    const double ma = uniform01(rng) * 0.2, mb = uniform01(rng) * 0.2;
    const double sa = uniform01(rng) * 0.05, sb = uniform01(rng) * 0.05;
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = ma + sa * standard_normal(rng);
    for (auto& v : b) v = mb + sb * standard_normal(rng);
    const double p1 = shifted_one_tailed_test(a, b, d).pValue;
    const double p2 = shifted_one_tailed_test(b, a, d).pValue;
    both += p1 < alpha && p2 < alpha;
  }
  report("c7b shifted-test mutual exclusion", both == 0,
         std::to_string(both) + " of 10000 random pairs reject both directions (d = 0.01, alpha = 0.02)");
}

void criterion8(const Corpus& spam) {
  ExperimentConfig c = spam_config();
  c.budgets = {5, 10, 15, 20, 25, 30};
  c.methods = {Method::MdeExc};
  c.reference = Method::MdeExc;
  const ExperimentResult r = run_experiment(spam, c);
  print_summary("spam exclusive", r);
  double lo = 1.0, hi = 0.0;
  for (int b : c.budgets) {
    lo = std::min(lo, r.cell(Method::MdeExc, b).meanMae);
    hi = std::max(hi, r.cell(Method::MdeExc, b).meanMae);
  }
  report("c8 exclusive ground truth", hi <= 0.05 && hi - lo <= 0.02,
         "MDE-EXC MAE range [" + fmt(lo) + ", " + fmt(hi) + "] over budgets 5-30 (max <= 0.05, spread " +
             fmt(hi - lo) + " <= 0.02)");
}

void criterion9(const Corpus& spam) {
  ExperimentConfig c = spam_config();
  c.budgets = {5};
  c.learner.algorithm = Algorithm::LogitBoost;
  const ExperimentResult r = run_experiment(spam, c);
  print_summary("spam logitboost", r);
  collect_robust("spam/low/logitboost", r);
  const double hyb = r.cell(Method::MdeHyb, 5).meanMae;
  if (std::isnan(hyb_forest_b5)) {
    ExperimentConfig f = spam_config();
    f.budgets = {5};
    f.methods = {Method::MdeHyb};
    hyb_forest_b5 = run_experiment(spam, f).cell(Method::MdeHyb, 5).meanMae;
  }
  report("c9 learner swap", std::fabs(hyb - hyb_forest_b5) <= 0.02,
         "MDE-HYB at budget 5: LogitBoost " + fmt(hyb) + ", forest " + fmt(hyb_forest_b5) + ", change " +
             fmt(std::fabs(hyb - hyb_forest_b5)) + " (<= 0.02)");
}

void criterion10(const Corpus& spam) {
  ExperimentConfig c = spam_config();
  c.correlated = CorrelatedErrors{};
  const ExperimentResult r = run_experiment(spam, c);
  print_summary("spam correlated", r);
  collect_robust("spam/low/correlated", r);
  const double hyb = r.cell(Method::MdeHyb, 5).meanMae;
  double worst = -1.0;
  for (int b : c.budgets) {
    const double bound = std::min(r.cell(Method::Mde, b).meanMae, r.cell(Method::Ear, b).meanMae) + 0.015;
    worst = std::max(worst, r.cell(Method::MdeHyb, b).meanMae - bound);
  }
  report("c10 correlated errors", hyb <= 0.05 && worst <= 0.0,
         "MDE-HYB at budget 5 " + fmt(hyb) + " (<= 0.05); worst excess over min(MDE, EAR) + 0.015 is " + fmt(worst));
}

void low_predictability(std::uint64_t corpusSeed) {
  const Corpus corpus = resolve_corpus("low-predictability", corpusSeed);
  ExperimentConfig c = spam_config();
  c.corpusTag = "low-predictability";
  c.budgets = {5};
  c.methods = {Method::MdeHyb, Method::Ear, Method::Mde, Method::GmGt, Method::GmAll};
  const ExperimentResult r = run_experiment(corpus, c);
  print_summary("low-predictability", r);
  collect_robust("low-predictability/low", r);
  const double hyb = r.cell(Method::MdeHyb, 5).meanMae, ear = r.cell(Method::Ear, 5).meanMae;
  const double gmGt = r.cell(Method::GmGt, 5).meanMae, gmAll = r.cell(Method::GmAll, 5).meanMae;
  report("lowpred ordering", hyb < ear && ear < gmGt && gmGt < gmAll,
         "budget 5: MDE-HYB " + fmt(hyb) + " < EAR " + fmt(ear) + " < GM-GT " + fmt(gmGt) + " < GM-ALL " + fmt(gmAll));
}

void criterion5() {
  double worst = -1.0;
  std::string where = "none";
  int violations = 0;
  for (const auto& c : robustCells) {
    const double excess = c.hyb - (std::min(c.mde, c.ear) + 0.015);
    if (excess > 0.0) {
      ++violations;
      std::cout << "    violation " << c.label << " b=" << c.budget << ": MDE-HYB " << fmt(c.hyb) << ", MDE "
                << fmt(c.mde) << ", EAR " << fmt(c.ear) << "\n";
    }
    if (excess > worst) {
      worst = excess;
      where = c.label + " b=" + std::to_string(c.budget);
    }
  }
  report("c5 robustness", !robustCells.empty() && violations == 0,
         std::to_string(violations) + " of " + std::to_string(robustCells.size()) +
             " cells exceed min(MDE, EAR) + 0.015; worst excess " + fmt(worst) + " at " + where);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only(argv + 1, argv + argc);
  auto wanted = [&](const char* id) { return only.empty() || only.contains(id); };

  const std::uint64_t corpusSeed = BenchConfig{}.corpusSeed;
  const auto start = Clock::now();
  const Corpus spam = resolve_corpus("spam", corpusSeed);
  std::cout << "spam corpus: " << spam.size() << " x " << spam.dim()
            << (std::getenv("DQEST_SPAMBASE") ? " (DQEST_SPAMBASE)" : " (synthetic stand-in)") << "\n";

  if (wanted("c1")) criterion1(spam);
  if (wanted("c2")) criterion2(spam);
  if (wanted("c7")) criterion7();
  if (wanted("c6")) criterion6(spam);
  if (wanted("c3")) criterion3(spam);
  if (wanted("c4")) criterion4(spam);
  if (wanted("c9")) criterion9(spam);
  if (wanted("c10")) criterion10(spam);
  if (wanted("c8")) criterion8(spam);
  if (wanted("lowpred")) low_predictability(corpusSeed);
  if (wanted("c5")) criterion5();

  std::cout << "total " << fmt(seconds_since(start), 1) << " s, " << failures << " failing\n";
  return failures == 0 ? 0 : 1;
}
