#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "blockwright/agent/pipeline.hpp"
#include "blockwright/eval/harness.hpp"
#include "blockwright/grid/wire.hpp"
#include "blockwright/service/server.hpp"
#include "blockwright/service/session.hpp"

using namespace blockwright;

namespace {

service::HttpServer *g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int fail(const Error &e) {
  std::cerr << "error: " << e.to_string() << "\n";
  return 2;
}

Result<llm::BackendConfig> backend_config(const std::string &kind, const std::string &config_path) {
  llm::BackendConfig config;
  if (!config_path.empty()) {
    auto loaded = service::ServiceConfig::load(config_path);
    if (!loaded) return loaded.error();
    config = loaded.value().backend;
  }
  if (kind == "deterministic") config.kind = llm::BackendConfig::Kind::Deterministic;
  else if (kind == "remote") config.kind = llm::BackendConfig::Kind::Remote;
  config.apply_environment();
  if (auto ok = config.validate(); !ok) return ok.error();
  return config;
}

Result<std::string> slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int serve(const std::string &host, int port, const std::string &data, const std::string &config_path) {
  service::ServiceConfig config;
  if (!config_path.empty()) {
    auto loaded = service::ServiceConfig::load(config_path);
    if (!loaded) return fail(loaded.error());
    config = loaded.value();
  }
  if (!data.empty()) config.data_dir = data;
  auto manager = service::SessionManager::open(config);
  if (!manager) return fail(manager.error());
  for (const auto &e : manager.value()->recover()) std::cerr << "skipped session log: " << e.to_string() << "\n";

  service::HttpServer server(*manager.value());
  const int bound = server.bind(host, port);
  if (bound < 0) return fail(make_error(Errc::Io, "cannot bind " + host + ":" + std::to_string(port)));
  std::cout << "listening on http://" << host << ":" << bound << " (" << manager.value()->session_ids().size()
            << " sessions recovered)" << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.run();
  g_server = nullptr;
  return 0;
}

// Each non-blank, non-# line is one turn; while a question is open the next
// line answers it.
int build(const std::string &script, const llm::BackendConfig &config, const std::string &shapes_path,
          const std::string &log_path) {
  auto text = slurp(script);
  if (!text) return fail(text.error());
  auto backend = llm::make_backend(config);
  if (!backend) return fail(backend.error());
  auto shapes = std::make_shared<memory::ShapeStore>();
  if (!shapes_path.empty()) {
    auto lib = memory::ShapeStore::load(shapes_path);
    if (!lib) return fail(lib.error());
    *shapes = std::move(lib).value();
  }
  agent::Agent agent(backend.value(), shapes);
  std::istringstream lines(text.value());
  std::string line;
  bool failed = false;
  while (std::getline(lines, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    line = line.substr(start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    auto outcome = agent.process_turn(line);
    std::cerr << "> " << line << "\n  " << agent::outcome_text(outcome) << "\n";
    failed = failed || std::holds_alternative<agent::Failed>(outcome);
  }
  if (agent.awaiting_answer()) {
    std::cerr << "script ended with an open question\n";
    failed = true;
  }
  if (!log_path.empty()) {
    std::ofstream(log_path, std::ios::binary) << agent.dialogue_jsonl();
  }
  std::cout << wire::snapshot(agent.grid()).dump(2) << "\n";
  return failed ? 1 : 0;
}

int replay(const std::string &log, const llm::BackendConfig &config) {
  auto grid = service::replay_log(log, config);
  if (!grid) return fail(grid.error());
  std::cout << wire::snapshot(grid.value()).dump(2) << "\n";
  return 0;
}

int run_eval(const std::string &task, const llm::BackendConfig &config, const std::string &pipeline,
             std::uint64_t seed, const std::string &out, bool strict, unsigned threads) {
  std::vector<eval::TaskId> tasks;
  if (task == "iv") tasks = {eval::TaskId::IVSingle, eval::TaskId::IVTwo};
  else tasks = {*eval::task_from_name(task)};

  auto backend = llm::make_backend(config);
  if (!backend) return fail(backend.error());
  eval::PipelineFactory factory;
  if (pipeline == "cot") {
    factory = [b = backend.value()] { return std::make_unique<agent::CotAgent>(b); };
  } else {
    factory = [b = backend.value()] {
      return std::make_unique<agent::Agent>(b, std::make_shared<memory::ShapeStore>());
    };
  }

  std::size_t misses = 0;
  for (auto t : tasks) {
    auto cases = eval::generate_dataset(t, seed);
    if (!cases) return fail(cases.error());
    auto report = t == eval::TaskId::Toolbench ? eval::run_workflow_eval(cases.value())
                                               : eval::run_eval(t, cases.value(), factory, threads);
    std::cout << report.to_csv();
    if (!out.empty()) {
      auto dir = eval::write_report(report, out);
      if (!dir) return fail(dir.error());
      std::cerr << "wrote " << dir.value().string() << "\n";
    }
    for (const auto &f : eval::threshold_failures(report)) {
      std::cerr << "below threshold: " << f << "\n";
      ++misses;
    }
  }
  return strict && misses > 0 ? 1 : 0;
}

int generate(const std::string &task, std::uint64_t seed, const std::string &out) {
  auto cases = eval::generate_dataset(*eval::task_from_name(task), seed);
  if (!cases) return fail(cases.error());
  const auto jsonl = eval::dataset_jsonl(cases.value());
  if (out.empty()) {
    std::cout << jsonl;
  } else {
    std::ofstream(out, std::ios::binary) << jsonl;
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"blockwright: build structures on a 16x16x16 grid from instructions"};
  app.require_subcommand(1);

  std::string backend_kind; // empty keeps the config file's choice
  std::string config_path;
  const std::vector<std::string> backend_kinds{"deterministic", "remote"};

  auto *serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data;
  serve_cmd->add_option("--port", port, "Port, 0 for any free one")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Address to bind");
  serve_cmd->add_option("--data", data, "Data directory for session logs");
  serve_cmd->add_option("--config", config_path, "Service config file")->check(CLI::ExistingFile);

  auto *build_cmd = app.add_subcommand("build", "Run an instruction script and print the final grid");
  std::string script;
  std::string shapes_path;
  std::string log_out;
  build_cmd->add_option("--script", script, "One instruction or answer per line")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--backend", backend_kind)->check(CLI::IsMember(backend_kinds));
  build_cmd->add_option("--config", config_path, "Service config file supplying backend settings")
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--shapes", shapes_path, "Shape library to start from")->check(CLI::ExistingFile);
  build_cmd->add_option("--log", log_out, "Write the dialogue log here");

  auto *replay_cmd = app.add_subcommand("replay", "Replay a dialogue log and print the final grid");
  std::string log;
  replay_cmd->add_option("--log", log, "Session log (JSON lines)")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--backend", backend_kind)->check(CLI::IsMember(backend_kinds));
  replay_cmd->add_option("--config", config_path)->check(CLI::ExistingFile);

  const std::vector<std::string> eval_tasks{"i", "ii", "iii", "iv", "v", "toolbench"};
  auto *eval_cmd = app.add_subcommand("eval", "Score a pipeline on a benchmark task");
  std::string task;
  std::string pipeline = "agent";
  std::uint64_t seed = 0;
  std::string out;
  bool strict = false;
  unsigned threads = 1;
  eval_cmd->add_option("--task", task)->required()->check(CLI::IsMember(eval_tasks));
  eval_cmd->add_option("--backend", backend_kind)->check(CLI::IsMember(backend_kinds));
  eval_cmd->add_option("--config", config_path)->check(CLI::ExistingFile);
  eval_cmd->add_option("--pipeline", pipeline)->check(CLI::IsMember({"agent", "cot"}));
  eval_cmd->add_option("--seed", seed);
  eval_cmd->add_option("--out", out, "Report directory");
  eval_cmd->add_option("--threads", threads)->check(CLI::Range(1u, 64u));
  eval_cmd->add_flag("--strict", strict, "Exit 1 when a threshold is missed");

  const std::vector<std::string> dataset_tasks{"i", "ii", "iii", "iv-single", "iv-two", "v", "toolbench"};
  auto *gen_cmd = app.add_subcommand("generate", "Write a benchmark dataset as JSON lines");
  gen_cmd->add_option("--task", task)->required()->check(CLI::IsMember(dataset_tasks));
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--out", out, "Output file, stdout when omitted");

  CLI11_PARSE(app, argc, argv);

  if (serve_cmd->parsed()) return serve(host, port, data, config_path);
  if (gen_cmd->parsed()) return generate(task, seed, out);

  auto config = backend_config(backend_kind, config_path);
  if (!config) return fail(config.error());
  if (build_cmd->parsed()) return build(script, config.value(), shapes_path, log_out);
  if (replay_cmd->parsed()) return replay(log, config.value());
  return run_eval(task, config.value(), pipeline, seed, out, strict, threads);
}
