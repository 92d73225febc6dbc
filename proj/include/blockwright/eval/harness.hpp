#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/agent/pipeline.hpp"
#include "blockwright/eval/datasets.hpp"
#include "blockwright/eval/metrics.hpp"
#include "blockwright/memory/workflow.hpp"

namespace blockwright::eval {

/// Each case gets a fresh pipeline from the factory.
using PipelineFactory = std::function<std::unique_ptr<agent::Pipeline>()>;

/// Produces the calls a system issues for one toolbench case.
using WorkflowRunner = std::function<Result<std::vector<memory::WorkflowCall>>(const TaskCase &)>;

struct MetricsReport {
  TaskId task = TaskId::I;
  std::size_t cases = 0;
  double seconds = 0;
  /// Flat metric list in report order; nullopt is not applicable.
  std::vector<std::pair<std::string, std::optional<double>>> rows;
  std::vector<nlohmann::ordered_json> details; // one per case

  std::optional<double> metric(std::string_view name) const;
  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

/// Runs every case, answering clarification questions from gold. Pipeline
/// failures score as wrong answers. threads > 1 evaluates cases concurrently.
MetricsReport run_eval(TaskId task, const std::vector<TaskCase> &cases, const PipelineFactory &factory,
                       unsigned threads = 1);

/// Abstracts each example into the workflow store, then fills the stored
/// templates with the new information.
Result<std::vector<memory::WorkflowCall>> reuse_workflows(const TaskCase &c);

MetricsReport run_workflow_eval(const std::vector<TaskCase> &cases, const WorkflowRunner &runner = reuse_workflows);

/// Acceptance thresholds the report misses; empty when all hold.
std::vector<std::string> threshold_failures(const MetricsReport &report);

/// Writes report.json and report.csv under out/<timestamp>-<task>/ and
/// returns that directory.
Result<std::filesystem::path> write_report(const MetricsReport &report, const std::filesystem::path &out);

} // namespace blockwright::eval
