#include "dqest/decisions.hpp"

#include <charconv>
#include <sstream>
#include <unordered_map>

namespace dqest {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double number(const std::string& cell, std::size_t row, const std::string& column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw ParseError(row, "column '" + column + "': cannot parse '" + cell + "'");
  }
  return v;
}

int binary(const std::string& cell, std::size_t row, const std::string& column) {
  const double v = number(cell, row, column);
  if (v != 0.0 && v != 1.0) throw ValidationError("row " + std::to_string(row) + ": column '" + column + "' must be 0 or 1");
  return static_cast<int>(v);
}

struct Sheet {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

Sheet read_sheet(const std::string& text) {
  Sheet sheet;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (trim(line).empty()) continue;
    auto cells = cells_of(line);
    if (sheet.header.empty()) {
      sheet.header = std::move(cells);
      continue;
    }
    if (cells.size() != sheet.header.size()) {
      throw ParseError(lineNo, "expected " + std::to_string(sheet.header.size()) + " columns, found " +
                                   std::to_string(cells.size()));
    }
    sheet.rows.emplace_back(lineNo, std::move(cells));
  }
  if (sheet.header.empty()) throw ParseError(0, "missing header");
  return sheet;
}

std::size_t column(const Sheet& sheet, const std::string& name) {
  for (std::size_t c = 0; c < sheet.header.size(); ++c) {
    if (sheet.header[c] == name) return c;
  }
  throw ParseError(1, "missing column '" + name + "'");
}

std::vector<std::size_t> feature_columns(const Sheet& sheet) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < sheet.header.size(); ++c) {
    const auto& h = sheet.header[c];
    if (h.size() > 1 && h[0] == 'f' && h.find_first_not_of("0123456789", 1) == std::string::npos) {
      if (std::stoul(h.substr(1)) != out.size()) throw ParseError(1, "feature columns must be f0, f1, ... in order");
      out.push_back(c);
    }
  }
  if (out.empty()) throw ParseError(1, "no feature columns (f0, f1, ...)");
  return out;
}

}  // namespace

DecisionTable parse_decisions_csv(const std::string& text, const std::string& gtColumn) {
  const Sheet sheet = read_sheet(text);
  const std::size_t workerCol = column(sheet, "worker_id");
  const std::size_t instanceCol = column(sheet, "instance_id");
  const std::size_t decisionCol = column(sheet, "decision");
  const std::size_t gtCol = column(sheet, gtColumn);
  std::size_t labelCol = sheet.header.size();
  for (std::size_t c = 0; c < sheet.header.size(); ++c) {
    if (sheet.header[c] == "true_label") labelCol = c;
  }
  const auto features = feature_columns(sheet);

  DecisionTable table;
  std::vector<double> values;
  std::unordered_map<std::string, Index> instances;
  std::unordered_map<long long, std::size_t> workerSlot;
  for (const auto& [row, cells] : sheet.rows) {
    const double workerValue = number(cells[workerCol], row, "worker_id");
    const auto workerKey = static_cast<long long>(workerValue);
    if (static_cast<double>(workerKey) != workerValue || workerKey < 0) {
      throw ValidationError("row " + std::to_string(row) + ": worker_id must be a non-negative integer");
    }
    const auto& name = cells[instanceCol];
    if (instances.contains(name)) {
      throw ValidationError("row " + std::to_string(row) + ": instance '" + name + "' appears more than once");
    }
    const auto instance = static_cast<Index>(table.corpus.labels.size());
    instances.emplace(name, instance);
    for (auto c : features) values.push_back(number(cells[c], row, sheet.header[c]));
    const bool flagged = binary(cells[gtCol], row, gtColumn) == 1;
    int label = kUnknownLabel;
    if (labelCol < cells.size() && !cells[labelCol].empty()) label = binary(cells[labelCol], row, "true_label");
    if (flagged && label == kUnknownLabel) {
      throw ValidationError("row " + std::to_string(row) + ": ground-truth record without true_label");
    }
    table.corpus.labels.push_back(label);
    table.corpus.ids.push_back(name);

    auto [it, inserted] = workerSlot.emplace(workerKey, table.workers.size());
    if (inserted) {
      table.workers.emplace_back();
      table.workers.back().id = static_cast<WorkerId>(workerKey);
    }
    table.workers[it->second].records.push_back({instance, binary(cells[decisionCol], row, "decision"), flagged});
  }
  const auto rows = static_cast<Index>(table.corpus.labels.size());
  if (rows == 0) throw ValidationError("decisions file has no rows");
  table.corpus.features = Eigen::Map<const FeatureMatrix>(values.data(), rows, static_cast<Index>(features.size()));
  return table;
}

GroundTruthPool append_exclusive_csv(DecisionTable& table, const std::string& text) {
  const Sheet sheet = read_sheet(text);
  const std::size_t instanceCol = column(sheet, "instance_id");
  const std::size_t labelCol = column(sheet, "true_label");
  const auto features = feature_columns(sheet);
  if (static_cast<Index>(features.size()) != table.corpus.dim()) {
    throw ValidationError("exclusive ground truth has " + std::to_string(features.size()) + " features, decisions have " +
                          std::to_string(table.corpus.dim()));
  }
  std::unordered_map<std::string, Index> known;
  for (std::size_t i = 0; i < table.corpus.ids.size(); ++i) known.emplace(table.corpus.ids[i], static_cast<Index>(i));

  if (sheet.rows.empty()) throw ValidationError("exclusive ground-truth file has no rows");
  GroundTruthPool pool;
  pool.exclusive = true;
  const Index base = table.corpus.size();
  FeatureMatrix extra(static_cast<Index>(sheet.rows.size()), table.corpus.dim());
  for (std::size_t r = 0; r < sheet.rows.size(); ++r) {
    const auto& [row, cells] = sheet.rows[r];
    const auto& name = cells[instanceCol];
    if (known.contains(name)) {
      throw ValidationError("row " + std::to_string(row) + ": exclusive instance '" + name + "' was decided by a worker");
    }
    known.emplace(name, base + static_cast<Index>(r));
    for (std::size_t f = 0; f < features.size(); ++f) {
      extra(static_cast<Index>(r), static_cast<Index>(f)) = number(cells[features[f]], row, sheet.header[features[f]]);
    }
    const int label = binary(cells[labelCol], row, "true_label");
    table.corpus.labels.push_back(label);
    table.corpus.ids.push_back(name);
    pool.entries.push_back({base + static_cast<Index>(r), label, kNoWorker});
  }
  FeatureMatrix merged(base + extra.rows(), table.corpus.dim());
  merged << table.corpus.features, extra;
  table.corpus.features = std::move(merged);
  return pool;
}

}  // namespace dqest
