// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "kglf/engine.hpp"
#include "kglf/error.hpp"
#include "kglf/harness.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace kglf;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + p.string());
  out << text;
}

Timestamp now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

py::dict node_dict(const KnowledgeGraph& g, NodeIx u) {
  const auto& n = g.node(u);
  py::dict d;
  d["id"] = n.id;
  d["label"] = n.label;
  d["concept"] = g.concept_at(n.type).id;
  d["attributes"] = n.attributes;
  return d;
}

py::dict job_dict(const TrainJob& job) {
  py::dict d;
  d["id"] = job.id;
  d["mode"] = std::string(to_string(job.mode));
  d["standard"] = std::string(to_string(job.standard));
  d["status"] = std::string(to_string(job.status));
  d["training_size"] = job.training_size;
  if (job.report) {
    d["best_fitness"] = job.report->best_fitness;
    d["iterations"] = job.report->iterations_used;
    d["restarts"] = job.report->restarts;
    d["fitness_trace"] = job.report->fitness_trace;
  }
  if (!job.note.empty()) d["note"] = job.note;
  if (!job.error.empty()) d["error"] = job.error;
  return d;
}

SyntheticSpec make_spec(std::uint64_t seed, std::size_t persons, std::size_t stops, std::size_t cities,
                        std::size_t links, std::tuple<double, double, double> mix, double holdout) {
  SyntheticSpec s;
  s.concepts = {{"Person", persons}, {"Stop", stops}, {"City", cities}};
  s.links = links;
  std::tie(s.triadic_closure, s.type_affinity, s.temporal_recency) = mix;
  s.holdout = holdout;
  s.seed = seed;
  return s;
}

// Python-facing wrapper over Engine that speaks external ids.
class PyEngine {
 public:
  PyEngine(const fs::path& bundle_dir, bool persist, EngineConfig config) {
    GraphBundle bundle;
    if (fs::exists(bundle_dir)) bundle = import_bundle(bundle_dir);
    if (persist) config.bundle_dir = bundle_dir;
    engine_ = std::make_unique<Engine>(std::move(bundle), std::move(config));
  }

  py::dict summary() const {
    const auto s = engine_->summary();
    py::dict d;
    d["nodes"] = s.nodes;
    d["links"] = s.links;
    d["non_links"] = s.non_links;
    d["links_per_relation"] = py::dict(py::cast(std::map<std::string, std::size_t>(
        s.links_per_relation.begin(), s.links_per_relation.end())));
    d["nodes_per_concept"] = py::dict(py::cast(std::map<std::string, std::size_t>(
        s.nodes_per_concept.begin(), s.nodes_per_concept.end())));
    py::dict fb;
    fb["total"] = s.feedback_total;
    fb["accepted"] = s.feedback_accepted;
    fb["rejected"] = s.feedback_rejected;
    d["feedback"] = fb;
    return d;
  }

  py::list nodes(std::optional<std::string> concept_id) const {
    const auto ids = engine_->nodes(concept_id);
    py::list out;
    engine_->with_graph([&](const KnowledgeGraph& g) {
      for (auto u : ids) out.append(node_dict(g, u));
      return 0;
    });
    return out;
  }

  py::list recommend(const std::string& node_id, const std::string& mode_text, std::size_t k,
                     bool interleave) {
    const auto mode = parse_mode(mode_text);
    const auto items = engine_->recommend(node_id, mode, k, interleave);
    py::list out;
    engine_->with_graph([&](const KnowledgeGraph& g) {
      const auto target = g.node_by_id(node_id);
      for (const auto& item : items) {
        const auto& r = item.rec;
        py::dict d;
        d["rank"] = r.rank;
        d["subject"] = g.node(r.subject).id;
        d["object"] = g.node(r.object).id;
        d["relation"] = r.relation ? py::object(py::str(g.relation(*r.relation).id)) : py::object(py::none());
        d["score"] = r.score;
        d["source"] = std::string(to_string(r.source));
        d["baseline_drawn"] = r.baseline_drawn;
        d["candidate"] = node_dict(g, r.subject == target ? r.object : r.subject);
        if (mode == PredictionMode::existence) {
          py::list compat;
          for (const auto& c : item.compatible) {
            py::dict cd;
            cd["subject"] = g.node(c.subject).id;
            cd["object"] = g.node(c.object).id;
            cd["relation"] = g.relation(c.relation).id;
            compat.append(cd);
          }
          d["compatible_relations"] = compat;
        }
        out.append(d);
      }
      return 0;
    });
    return out;
  }

  py::dict feedback(const std::string& subject, const std::string& object,
                    std::optional<std::string> relation, bool accepted, const std::string& mode,
                    std::optional<Timestamp> timestamp) {
    FeedbackEvent e;
    engine_->with_graph([&](const KnowledgeGraph& g) {
      e.subject = g.node_by_id(subject);
      e.object = g.node_by_id(object);
      if (relation) e.relation = g.relation_by_id(*relation);
      return 0;
    });
    e.accepted = accepted;
    e.mode = parse_mode(mode);
    e.timestamp = timestamp ? *timestamp : now_ms();
    const auto out = engine_->submit_feedback(e);
    py::dict d;
    d["feedback_count"] = out.feedback_count;
    d["train_job"] = out.train_job ? py::object(py::int_(*out.train_job)) : py::object(py::none());
    return d;
  }

  std::map<std::string, double> weights(const std::string& mode) const {
    const auto doc = engine_->weight_document(parse_mode(mode));
    return {doc.entries.begin(), doc.entries.end()};
  }

  void set_weights(const std::string& mode_text, const std::map<std::string, double>& values) {
    const auto mode = parse_mode(mode_text);
    WeightDocument doc{mode, now_ms(), {values.begin(), values.end()}};
    engine_->set_weights(mode, weights_from_document(engine_->ensemble(mode), doc));
  }

  py::dict train(const std::string& mode, std::optional<std::string> standard, bool wait) {
    std::optional<Standard> st;
    if (standard) st = parse_standard(*standard);
    const auto id = engine_->start_training(parse_mode(mode), st);
    if (wait) {
      py::gil_scoped_release release;
      engine_->wait_for_jobs();
    }
    return job(id);
  }

  py::dict job(std::uint64_t id) const {
    const auto j = engine_->job(id);
    if (!j) throw Error(ErrorCode::unknown_id, "unknown job " + std::to_string(id));
    return job_dict(*j);
  }

  void wait() {
    py::gil_scoped_release release;
    engine_->wait_for_jobs();
  }

  void export_to(const fs::path& out_dir, bool anonymize) const {
    const auto files = engine_->export_files(anonymize);
    fs::create_directories(out_dir);
    for (const auto& [name, content] : files) write_text(out_dir / name, content);
  }

 private:
  std::unique_ptr<Engine> engine_;
};

}  // namespace

PYBIND11_MODULE(_kglf, m) {
  m.doc() = "Native core of kglf";

  static py::exception<Error> error_type(m, "KglfError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(to_string(e.code()), e.what());
      PyErr_SetObject(error_type.ptr(), args.ptr());
    }
  });

  m.def(
      "generate",
      [](const fs::path& out, std::uint64_t seed, std::size_t persons, std::size_t stops, std::size_t cities,
         std::size_t links, std::tuple<double, double, double> mix, double holdout) {
        const auto sg = generate(make_spec(seed, persons, stops, cities, links, mix, holdout));
        export_bundle(GraphBundle{sg.visible, std::nullopt, std::nullopt, {}}, out);
        write_text(out / kHiddenFile, render_hidden(sg.visible, sg.hidden));
        py::dict d;
        d["nodes"] = sg.visible.node_count();
        d["visible_links"] = sg.visible.link_count();
        d["hidden_links"] = sg.hidden.size();
        return d;
      },
      py::arg("out_dir"), py::arg("seed") = 0, py::arg("persons") = 80, py::arg("stops") = 25,
      py::arg("cities") = 15, py::arg("links") = 480, py::arg("mix") = std::make_tuple(0.5, 0.3, 0.2),
      py::arg("holdout") = 0.2);

  m.def(
      "simulate_json",
      [](std::optional<fs::path> bundle, std::uint64_t seed, std::size_t budget, std::size_t k,
         std::size_t candidate_size, std::size_t retrain_every, std::size_t training_size,
         const std::string& scoring) {
        SimulationConfig config;
        config.budget = budget;
        config.k = k;
        config.candidate_size = candidate_size;
        config.retrain_every = retrain_every;
        config.training_size = training_size;
        config.seed = seed;
        if (scoring.rfind("onehot:", 0) == 0) {
          const auto e = default_ensemble(PredictionMode::existence);
          const auto idx = e.index_of(scoring.substr(7));
          if (!idx) throw Error(ErrorCode::invalid_argument, "unknown metric '" + scoring.substr(7) + "'");
          config.scoring = Scoring::fixed;
          config.fixed_weights = WeightVector::one_hot(e.size(), *idx);
        } else if (scoring == "zero") {
          config.scoring = Scoring::zero;
        } else if (scoring != "learned") {
          throw Error(ErrorCode::invalid_argument, "unknown scoring '" + scoring + "'");
        }
        SyntheticGraph sg;
        if (bundle) {
          auto b = import_bundle(*bundle);
          sg.hidden = parse_hidden(b.graph, slurp(*bundle / kHiddenFile));
          sg.visible = std::move(b.graph);
        } else {
          sg = generate(make_spec(seed, 80, 25, 15, 480, {0.5, 0.3, 0.2}, 0.2));
        }
        py::gil_scoped_release release;
        return report_to_json(simulate(sg.visible, sg.hidden, config));
      },
      py::arg("bundle") = py::none(), py::arg("seed") = 0, py::arg("budget") = 2000, py::arg("k") = 9,
      py::arg("candidate_size") = 30, py::arg("retrain_every") = 200, py::arg("training_size") = 200,
      py::arg("scoring") = "learned");

  m.def(
      "write_report_json",
      [](const std::vector<std::string>& runs, const fs::path& out) {
        std::vector<ExperimentReport> reports;
        for (const auto& r : runs) reports.push_back(report_from_json(r));
        write_report(reports, out);
      },
      py::arg("runs"), py::arg("out_dir"));

  m.def(
      "export_bundle",
      [](const fs::path& src, const fs::path& out, std::optional<std::string> salt,
         std::set<std::string> concepts) {
        const auto b = import_bundle(src);
        std::optional<AnonymizationPolicy> policy;
        if (salt) policy = AnonymizationPolicy{*salt, std::move(concepts)};
        export_bundle(b, out, policy);
      },
      py::arg("src"), py::arg("out_dir"), py::arg("salt") = py::none(),
      py::arg("concepts") = std::set<std::string>{"Person"});

  py::class_<PyEngine>(m, "Engine")
      .def(py::init([](const fs::path& bundle_dir, bool persist, std::size_t retrain_every,
                       std::size_t candidate_size, std::size_t training_size, std::uint64_t seed,
                       bool synchronous_training, const std::string& salt) {
             EngineConfig c;
             c.retrain_every = retrain_every;
             c.candidate_size = candidate_size;
             c.training_size = training_size;
             c.seed = seed;
             c.synchronous_training = synchronous_training;
             c.anonymize_salt = salt;
             return std::make_unique<PyEngine>(bundle_dir, persist, std::move(c));
           }),
           py::arg("bundle_dir"), py::arg("persist") = true, py::arg("retrain_every") = 200,
           py::arg("candidate_size") = 30, py::arg("training_size") = 200, py::arg("seed") = 0,
           py::arg("synchronous_training") = false, py::arg("salt") = "")
      .def("summary", &PyEngine::summary)
      .def("nodes", &PyEngine::nodes, py::arg("concept") = py::none())
      .def("recommend", &PyEngine::recommend, py::arg("node_id"), py::arg("mode") = "existence",
           py::arg("k") = 10, py::arg("interleave") = false)
      .def("feedback", &PyEngine::feedback, py::arg("subject"), py::arg("object"),
           py::arg("relation") = py::none(), py::arg("accepted") = true, py::arg("mode") = "existence",
           py::arg("timestamp") = py::none())
      .def("weights", &PyEngine::weights, py::arg("mode") = "existence")
      .def("set_weights", &PyEngine::set_weights, py::arg("mode"), py::arg("weights"))
      .def("train", &PyEngine::train, py::arg("mode") = "existence", py::arg("standard") = py::none(),
           py::arg("wait") = true)
      .def("job", &PyEngine::job, py::arg("id"))
      .def("wait", &PyEngine::wait)
      .def("export", &PyEngine::export_to, py::arg("out_dir"), py::arg("anonymize") = false);
}
