#include "dqest/core.hpp"
#include "dqest/log.hpp"

#include <iostream>
#include <mutex>

namespace dqest {
namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler handler = [](const std::string& message) { std::cerr << "warning: " << message << '\n'; };
  return handler;
}

}  // namespace

void warn(const std::string& message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  std::swap(handler, warning_handler());
  return handler;
}

void check_binary(int value, const char* what) {
  if (value != 0 && value != 1) {
    throw ValidationError(std::string(what) + " must be 0 or 1, got " + std::to_string(value));
  }
}

GroundTruthPool pool_from_workers(const Corpus& corpus, const std::vector<WorkerDecisionSet>& workers) {
  GroundTruthPool pool;
  for (const auto& worker : workers) {
    for (const auto& record : worker.records) {
      if (!record.groundTruthKnown) continue;
      const int label = corpus.labels.at(static_cast<std::size_t>(record.instance));
      check_binary(label, "ground-truth label");
      pool.entries.push_back({record.instance, label, worker.id});
    }
  }
  return pool;
}

std::vector<ScoredDecision> scored_decisions(const WorkerDecisionSet& worker) {
  std::vector<ScoredDecision> out;
  out.reserve(worker.records.size());
  for (const auto& r : worker.records) out.push_back({r.instance, r.decision, worker.id});
  return out;
}

double realized_accuracy(const Corpus& corpus, const WorkerDecisionSet& worker) {
  if (worker.records.empty()) throw ValidationError("realized_accuracy: worker has no records");
  std::size_t correct = 0;
  for (const auto& r : worker.records) {
    correct += corpus.labels[static_cast<std::size_t>(r.instance)] == r.decision ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(worker.records.size());
}

}  // namespace dqest
