#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "blockwright/agent/pipeline.hpp"
#include "blockwright/eval/harness.hpp"
#include "blockwright/grammar/parser.hpp"
#include "blockwright/grammar/spec_json.hpp"
#include "blockwright/grid/wire.hpp"
#include "blockwright/service/session.hpp"

namespace py = pybind11;
using namespace blockwright;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
T unwrap(Result<T> r) {
  if (!r) throw Failure(std::string(errc_name(r.error().code)) + ": " + r.error().message);
  return std::move(r).value();
}

py::object to_py(const nlohmann::ordered_json &j) { return py::module_::import("json").attr("loads")(j.dump()); }

llm::BackendConfig backend_from(const py::object &config) {
  if (config.is_none()) return {};
  const std::string text = py::str(py::module_::import("json").attr("dumps")(config));
  auto parsed = unwrap(llm::BackendConfig::from_json(nlohmann::json::parse(text)));
  if (auto ok = parsed.validate(); !ok) throw Failure(std::string(errc_name(ok.error().code)) + ": " + ok.error().message);
  return parsed;
}

eval::TaskId task_of(const std::string &name) {
  auto t = eval::task_from_name(name);
  if (!t) throw Failure("InvalidArgument: unknown task " + name);
  return *t;
}

class PyAgent {
public:
  explicit PyAgent(const py::object &backend)
      : agent_(unwrap(llm::make_backend(backend_from(backend))), std::make_shared<memory::ShapeStore>()) {}

  py::object turn(const std::string &text) {
    agent::TurnOutcome outcome = [&] {
      py::gil_scoped_release release;
      return agent_.process_turn(text);
    }();
    return to_py(agent::outcome_to_json(outcome));
  }
  void cancel() { agent_.cancel_turn(); }
  bool awaiting_answer() const { return agent_.awaiting_answer(); }
  py::object grid() const { return to_py(wire::snapshot(agent_.grid())); }
  std::vector<std::string> shapes() const { return agent_.shapes().names(); }
  std::string dialogue_jsonl() const { return agent_.dialogue_jsonl(); }

private:
  agent::Agent agent_;
};

} // namespace

PYBIND11_MODULE(_blockwright, m) {
  m.doc() = "Instruction-following builder on a 16x16x16 grid";
  py::register_exception<Failure>(m, "BlockwrightError", PyExc_RuntimeError);

  m.def(
      "parse",
      [](const std::string &text) {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (const auto &item : unwrap(grammar::parse_instruction(text))) out.push_back(grammar::item_to_json(item));
        return to_py(out);
      },
      py::arg("text"), "Parse one or more sentences into placement specs and memory commands.");

  m.def(
      "generate_dataset",
      [](const std::string &task, std::uint64_t seed) {
        return eval::dataset_jsonl(unwrap(eval::generate_dataset(task_of(task), seed)));
      },
      py::arg("task"), py::arg("seed") = 0, "Benchmark cases as JSON lines.");

  m.def(
      "evaluate",
      [](const std::string &task, std::uint64_t seed, const py::object &backend, unsigned threads) {
        const auto id = task_of(task);
        auto cases = unwrap(eval::generate_dataset(id, seed));
        auto b = unwrap(llm::make_backend(backend_from(backend)));
        eval::MetricsReport report;
        {
          py::gil_scoped_release release;
          report = id == eval::TaskId::Toolbench
                       ? eval::run_workflow_eval(cases)
                       : eval::run_eval(id, cases,
                                        [b] {
                                          return std::make_unique<agent::Agent>(
                                              b, std::make_shared<memory::ShapeStore>());
                                        },
                                        threads);
        }
        auto j = report.to_json();
        j["threshold_failures"] = eval::threshold_failures(report);
        return to_py(j);
      },
      py::arg("task"), py::arg("seed") = 0, py::arg("backend") = py::none(), py::arg("threads") = 1);

  m.def(
      "replay_log",
      [](const std::filesystem::path &log, const py::object &backend) {
        return to_py(wire::snapshot(unwrap(service::replay_log(log, backend_from(backend)))));
      },
      py::arg("log"), py::arg("backend") = py::none(), "Final grid of a session log.");

  py::class_<PyAgent>(m, "Agent")
      .def(py::init<const py::object &>(), py::arg("backend") = py::none())
      .def("turn", &PyAgent::turn, py::arg("text"), "Send an instruction, or answer the open question.")
      .def("cancel", &PyAgent::cancel)
      .def_property_readonly("awaiting_answer", &PyAgent::awaiting_answer)
      .def_property_readonly("grid", &PyAgent::grid)
      .def_property_readonly("shapes", &PyAgent::shapes)
      .def("dialogue_jsonl", &PyAgent::dialogue_jsonl);
}
