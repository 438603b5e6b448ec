#include "dqest/baselines.hpp"
#include "dqest/config.hpp"
#include "dqest/datasets.hpp"
#include "dqest/decisions.hpp"
#include "dqest/exclusive.hpp"
#include "dqest/hyb.hpp"
#include "dqest/log.hpp"
#include "dqest/mde.hpp"
#include "dqest/report.hpp"
#include "dqest/simharness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dqest;

namespace {

constexpr int kUsage = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct AssessOptions {
  std::string decisions;
  std::string gtColumn = "gt_known";
  std::string exclusiveGt;
  std::string method = "mde-hyb";
  std::string learner = "forest";
  std::string out;
  std::uint64_t seed = 1;
  int jobs = 1;
};

std::vector<EstimateRow> run_assess(const AssessOptions& opt, Method method) {
  DecisionTable table = parse_decisions_csv(read_file(opt.decisions), opt.gtColumn);
  ClassifierConfig learner;
  learner.algorithm = opt.learner == "logitboost" ? Algorithm::LogitBoost : Algorithm::Forest;
  learner.seed = derive_seed(opt.seed, "learner");
  MdeConfig mdeConfig;
  mdeConfig.seed = derive_seed(opt.seed, "mde");
  HybConfig hybConfig;
  hybConfig.seed = derive_seed(opt.seed, "hyb");

  std::vector<EstimateRow> rows(table.workers.size());
  for (std::size_t k = 0; k < rows.size(); ++k) rows[k].worker = table.workers[k].id;
  auto fill_hybrid = [&](const HybResult& r) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      rows[k].ear = r.ear[k];
      rows[k].mde = r.mde[k];
      rows[k].hyb = r.hyb[k];
      rows[k].branch = to_string(r.decision.branch);
      rows[k].pMde = r.decision.pMde;
      rows[k].pEar = r.decision.pEar;
    }
  };

  if (method == Method::MdeExc) {
    if (opt.exclusiveGt.empty()) throw ConfigError("--method mde-exc needs --exclusive-gt");
    const GroundTruthPool pool = append_exclusive_csv(table, read_file(opt.exclusiveGt));
    Rng rng = make_rng(opt.seed, "exclusive-share");
    const auto mde = mde_exclusive(table.corpus, table.workers, pool, mdeConfig, learner, rng);
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k].mde = mde[k];
    return rows;
  }
  if (!opt.exclusiveGt.empty()) warn("--exclusive-gt is only used by --method mde-exc");

  const GroundTruthPool pool = pool_from_workers(table.corpus, table.workers);
  switch (method) {
    case Method::Ear:
      for (std::size_t k = 0; k < rows.size(); ++k) rows[k].ear = ear_estimate(table.corpus, table.workers[k]);
      break;
    case Method::Mde: {
      const MdeModel model = fit_mde(table.corpus, table.workers, pool, mdeConfig, learner);
      const auto mde = assess_workers(model, table.workers);
      for (std::size_t k = 0; k < rows.size(); ++k) rows[k].mde = mde[k];
      break;
    }
    case Method::MdeHyb:
      fill_hybrid(mde_hyb(table.corpus, table.workers, pool, mdeConfig, learner, hybConfig));
      break;
    case Method::MdeGmAll:
    case Method::MdeSmGt: {
      mdeConfig.bankMode = method == Method::MdeGmAll ? BankMode::GlobalAll : BankMode::GlobalGt;
      const MdeModel model = fit_mde(table.corpus, table.workers, pool, mdeConfig, learner);
      fill_hybrid(mde_hyb(table.corpus, table.workers, pool, model, hybConfig));
      break;
    }
    case Method::GmGt:
    case Method::GmAll: {
      const auto estimates = method == Method::GmGt ? gm_gt_estimate(table.corpus, table.workers, learner)
                                                    : gm_all_estimate(table.corpus, table.workers, learner);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k].hyb = estimates[k];
        rows[k].branch = to_string(method);
      }
      break;
    }
    case Method::MdeExc:
      break;
  }
  return rows;
}

struct BenchOptions {
  std::string config;
  std::string out = "bench_out";
  int repetitions = 0;
  std::string budgets;
  std::string methods;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool dryRun = false;
};

int run_bench(const BenchOptions& opt) {
  BenchConfig config = load_bench_config(opt.config);
  auto& e = config.experiment;
  if (opt.repetitions > 0) e.repetitions = opt.repetitions;
  if (!opt.budgets.empty()) e.budgets = parse_int_list(opt.budgets);
  if (!opt.methods.empty()) e.methods = parse_method_list(opt.methods);
  if (opt.seed != 0) e.masterSeed = opt.seed;
  if (opt.jobs > 0) e.jobs = opt.jobs;
  validate(e);
  if (opt.dryRun) {
    write_metadata(std::cout, config);
    std::cout << "dry run: configuration is valid\n";
    return 0;
  }

  const Corpus corpus = resolve_corpus(e.corpusTag, config.corpusSeed);
  const ExperimentResult result = run_experiment(corpus, e);

  fs::create_directories(opt.out);
  std::ofstream results(fs::path(opt.out) / "results.csv");
  write_result_csv(results, result);
  std::ofstream summary(fs::path(opt.out) / "summary.csv");
  write_summary_csv(summary, result);
  std::ofstream table(fs::path(opt.out) / "table.md");
  write_markdown_table(table, result);
  std::ofstream meta(fs::path(opt.out) / "metadata.txt");
  write_metadata(meta, config);
  if (!results || !summary || !table || !meta) throw Error("failed writing outputs under " + opt.out);

  write_markdown_table(std::cout, result);
  std::cerr << "wall time: " << result.seconds << " s\n";
  return 0;
}

struct SimulateOptions {
  std::string corpus = "spam";
  std::string profile = "low";
  int budget = 5;
  std::uint64_t seed = 1;
  std::uint64_t corpusSeed = 20240101;
  std::string out;
};

int run_simulate(const SimulateOptions& opt) {
  const Corpus corpus = resolve_corpus(opt.corpus, opt.corpusSeed);
  const WorkerProfile profile = opt.profile == "high" ? high_quality_profile() : low_quality_profile();
  Rng rng = make_rng(opt.seed, "cohort");
  auto workers = simulate_cohort(corpus, profile, rng);
  Rng gtRng = make_rng(opt.seed, "ground-truth");
  std::ofstream file;
  if (!opt.out.empty()) file.open(opt.out);
  std::ostream& out = opt.out.empty() ? std::cout : file;
  out << "worker_id,instance_id";
  for (Index f = 0; f < corpus.dim(); ++f) out << ",f" << f;
  out << ",decision,gt_known,true_label\n";
  out.precision(17);
  for (const auto& w : workers) {
    const auto flagged = sample_ground_truth(w, std::min<std::size_t>(static_cast<std::size_t>(opt.budget), w.n()), gtRng);
    for (const auto& r : flagged.records) {
      out << w.id << ',' << corpus.ids[static_cast<std::size_t>(r.instance)];
      for (Index f = 0; f < corpus.dim(); ++f) out << ',' << corpus.features(r.instance, f);
      out << ',' << r.decision << ',' << (r.groundTruthKnown ? 1 : 0) << ','
          << corpus.labels[static_cast<std::size_t>(r.instance)] << '\n';
    }
  }
  return out ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-accuracy estimation for expert workers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  AssessOptions assess;
  auto* assessCmd = app.add_subcommand("assess", "Estimate each worker's accuracy from a decisions CSV");
  assessCmd->add_option("--decisions", assess.decisions, "worker_id,instance_id,f0..,decision,gt_known[,true_label]")
      ->required()
      ->check(CLI::ExistingFile);
  assessCmd->add_option("--gt-flags", assess.gtColumn, "Column marking ground-truth records")->capture_default_str();
  assessCmd->add_option("--exclusive-gt", assess.exclusiveGt, "instance_id,f0..,true_label for mde-exc")
      ->check(CLI::ExistingFile);
  assessCmd->add_option("--method", assess.method, "ear, mde, mde-hyb, gm-gt, gm-all, mde-exc, mde-gm-all, mde-sm-gt")
      ->capture_default_str();
  assessCmd->add_option("--learner", assess.learner, "forest or logitboost")
      ->check(CLI::IsMember({"forest", "logitboost"}))
      ->capture_default_str();
  assessCmd->add_option("--out", assess.out, "Output CSV (default: stdout)");
  assessCmd->add_option("--seed", assess.seed, "Master seed")->capture_default_str();
  assessCmd->add_option("--jobs", assess.jobs, "Thread cap; assess runs on one thread, so any value gives the same output")
      ->check(CLI::PositiveNumber);

  BenchOptions bench;
  auto* benchCmd = app.add_subcommand("bench", "Run a simulation sweep from a config file");
  benchCmd->add_option("--config", bench.config, "key = value experiment file")->required()->check(CLI::ExistingFile);
  benchCmd->add_option("--out", bench.out, "Output directory")->capture_default_str();
  benchCmd->add_option("--repetitions", bench.repetitions, "Override the repetition count");
  benchCmd->add_option("--budgets", bench.budgets, "Override the budget list, e.g. 5,10");
  benchCmd->add_option("--methods", bench.methods, "Override the method list");
  benchCmd->add_option("--seed", bench.seed, "Override the master seed");
  benchCmd->add_option("--jobs", bench.jobs, "Repetitions run in parallel")->check(CLI::PositiveNumber);
  benchCmd->add_flag("--dry-run", bench.dryRun, "Validate the configuration and exit");

  SimulateOptions simulate;
  auto* simulateCmd = app.add_subcommand("simulate", "Write a simulated decisions CSV");
  simulateCmd->add_option("--corpus", simulate.corpus, "spam, low-predictability, review, amt, csv:<path>")
      ->capture_default_str();
  simulateCmd->add_option("--profile", simulate.profile, "low or high")
      ->check(CLI::IsMember({"low", "high"}))
      ->capture_default_str();
  simulateCmd->add_option("--budget", simulate.budget, "Ground-truth records per worker")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulateCmd->add_option("--seed", simulate.seed, "Master seed")->capture_default_str();
  simulateCmd->add_option("--corpus-seed", simulate.corpusSeed, "Seed of synthetic corpora")->capture_default_str();
  simulateCmd->add_option("--out", simulate.out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  Method method = Method::MdeHyb;
  if (assessCmd->parsed()) {
    try {
      method = parse_method(assess.method);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n" << assessCmd->help();
      return kUsage;
    }
  }

  try {
    if (assessCmd->parsed()) {
      const auto rows = run_assess(assess, method);
      if (assess.out.empty()) {
        write_estimates(std::cout, rows);
      } else {
        std::ofstream out(assess.out);
        write_estimates(out, rows);
        if (!out) throw Error("failed writing " + assess.out);
      }
      return 0;
    }
    if (benchCmd->parsed()) return run_bench(bench);
    if (simulateCmd->parsed()) return run_simulate(simulate);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
