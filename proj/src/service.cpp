// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/service.hpp"

#include <httplib.h>

#include <charconv>
#include <functional>
#include <json.hpp>
#include <thread>

namespace kglf {

namespace {

using json = nlohmann::ordered_json;

// Error raised inside a handler with an explicit HTTP status.
struct HttpError {
  int status;
  std::string message;
};

int status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_id: return 404;
    case ErrorCode::conflict:
    case ErrorCode::duplicate: return 409;
    case ErrorCode::schema_violation:
    case ErrorCode::insufficient_data: return 422;
    case ErrorCode::invalid_argument:
    case ErrorCode::parse_error: return 400;
    case ErrorCode::io_error: return 500;
  }
  return 500;
}

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send(res, status, json{{"error", code}, {"message", message}});
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

Handler guarded(Handler fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const HttpError& e) {
      send_error(res, e.status, e.status == 404 ? "not_found" : "bad_request", e.message);
    } catch (const Error& e) {
      send_error(res, status_of(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "parse_error", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

PredictionMode mode_param(const httplib::Request& req, bool required = false) {
  if (!req.has_param("mode")) {
    if (required) throw HttpError{400, "missing mode parameter"};
    return PredictionMode::existence;
  }
  try {
    return parse_mode(req.get_param_value("mode"));
  } catch (const Error&) {
    throw HttpError{400, "mode must be 'existence' or 'semantic'"};
  }
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const auto text = req.get_param_value(name);
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw HttpError{400, std::string(name) + " must be a non-negative integer"};
  }
  return value;
}

bool bool_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return false;
  const auto v = req.get_param_value(name);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw HttpError{400, std::string(name) + " must be true or false"};
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body);
  if (!body.is_object()) throw HttpError{400, "request body must be a JSON object"};
  return body;
}

json node_json(const KnowledgeGraph& g, NodeIx u) {
  const auto& n = g.node(u);
  json attrs = json::object();
  for (const auto& [k, v] : n.attributes) attrs[k] = v;
  return {{"id", n.id}, {"label", n.label}, {"concept", g.concept_at(n.type).id}, {"attributes", attrs}};
}

json weights_json(const WeightDocument& doc) {
  json w = json::object();
  for (const auto& [name, value] : doc.entries) w[name] = value;
  return {{"mode", to_string(doc.mode)}, {"timestamp", doc.timestamp}, {"weights", w}};
}

json job_json(const TrainJob& job) {
  json j = {{"id", job.id},
            {"mode", to_string(job.mode)},
            {"standard", to_string(job.standard)},
            {"status", to_string(job.status)},
            {"training_size", job.training_size}};
  if (job.report) {
    j["best_fitness"] = job.report->best_fitness;
    j["iterations"] = job.report->iterations_used;
    j["restarts"] = job.report->restarts;
    j["fitness_trace"] = job.report->fitness_trace;
  }
  if (!job.note.empty()) j["note"] = job.note;
  if (!job.error.empty()) j["error"] = job.error;
  return j;
}

}  // namespace

struct Service::Impl {
  Engine& engine;
  httplib::Server server;
  std::thread thread;

  explicit Impl(Engine& e) : engine(e) { routes(); }

  void routes() {
    server.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) send_error(res, res.status, "not_found", "no such route");
    });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send(res, 200, json{{"status", "ok"}});
    });

    server.Get("/graph/summary", guarded([this](const httplib::Request&, httplib::Response& res) {
      const auto s = engine.summary();
      json rel = json::object();
      for (const auto& [id, n] : s.links_per_relation) rel[id] = n;
      json con = json::object();
      for (const auto& [id, n] : s.nodes_per_concept) con[id] = n;
      send(res, 200,
           json{{"nodes", s.nodes},
                {"links", s.links},
                {"non_links", s.non_links},
                {"links_per_relation", rel},
                {"nodes_per_concept", con},
                {"feedback", {{"total", s.feedback_total},
                              {"accepted", s.feedback_accepted},
                              {"rejected", s.feedback_rejected}}}});
    }));

    server.Get("/nodes", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> concept_id;
      if (req.has_param("concept")) concept_id = req.get_param_value("concept");
      const auto ids = engine.nodes(concept_id);
      json out = json::array();
      engine.with_graph([&](const KnowledgeGraph& g) {
        for (auto u : ids) out.push_back(node_json(g, u));
        return 0;
      });
      send(res, 200, json{{"nodes", out}});
    }));

    server.Get(R"(/nodes/([^/]+)/recommendations)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 const auto mode = mode_param(req);
                 const auto k = size_param(req, "k", 10);
                 const bool interleave = bool_param(req, "interleave");
                 const auto items = engine.recommend(id, mode, k, interleave);
                 json out = json::array();
                 engine.with_graph([&](const KnowledgeGraph& g) {
                   const auto target = g.node_by_id(id);
                   for (const auto& item : items) {
                     const auto& r = item.rec;
                     const NodeIx other = r.subject == target ? r.object : r.subject;
                     json compat = json::array();
                     for (const auto& c : item.compatible) {
                       compat.push_back({{"subject", g.node(c.subject).id},
                                         {"object", g.node(c.object).id},
                                         {"relation", g.relation(c.relation).id}});
                     }
                     json e = {{"rank", r.rank},
                               {"subject", g.node(r.subject).id},
                               {"object", g.node(r.object).id},
                               {"relation", r.relation ? json(g.relation(*r.relation).id) : json(nullptr)},
                               {"score", r.score},
                               {"source", to_string(r.source)},
                               {"baseline_drawn", r.baseline_drawn},
                               {"candidate", node_json(g, other)}};
                     if (mode == PredictionMode::existence) e["compatible_relations"] = compat;
                     out.push_back(std::move(e));
                   }
                   return 0;
                 });
                 send(res, 200, json{{"node", id}, {"mode", to_string(mode)}, {"items", out}});
               }));

    server.Post("/feedback", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      for (const auto& [key, _] : body.items()) {
        if (key != "subject" && key != "object" && key != "relation" && key != "accepted" &&
            key != "mode" && key != "timestamp") {
          throw HttpError{400, "unknown field '" + key + "'"};
        }
      }
      if (!body.contains("subject") || !body.contains("object") || !body.contains("accepted")) {
        throw HttpError{400, "feedback needs subject, object and accepted"};
      }
      FeedbackEvent e;
      try {
        engine.with_graph([&](const KnowledgeGraph& g) {
          e.subject = g.node_by_id(body.at("subject").get<std::string>());
          e.object = g.node_by_id(body.at("object").get<std::string>());
          if (body.contains("relation") && !body.at("relation").is_null()) {
            e.relation = g.relation_by_id(body.at("relation").get<std::string>());
          }
          return 0;
        });
        e.accepted = body.at("accepted").get<bool>();
        e.mode = body.contains("mode") ? parse_mode(body.at("mode").get<std::string>())
                                       : PredictionMode::existence;
        e.timestamp = body.contains("timestamp")
                          ? body.at("timestamp").get<Timestamp>()
                          : std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::system_clock::now().time_since_epoch())
                                .count();
      } catch (const Error& err) {
        send_error(res, 422, to_string(err.code()), err.what());
        return;
      }
      try {
        const auto out = engine.submit_feedback(e);
        send(res, 201,
             json{{"feedback_count", out.feedback_count},
                  {"train_job", out.train_job ? json(*out.train_job) : json(nullptr)}});
      } catch (const Error& err) {
        const bool clash = err.code() == ErrorCode::conflict || err.code() == ErrorCode::duplicate;
        send_error(res, clash ? 409 : 422, to_string(err.code()), err.what());
      }
    }));

    server.Get("/feedback", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto events = engine.recent_feedback(size_param(req, "limit", 50));
      json out = json::array();
      engine.with_graph([&](const KnowledgeGraph& g) {
        for (const auto& e : events) out.push_back(json::parse(feedback_record(g, e)));
        return 0;
      });
      send(res, 200, json{{"events", out}});
    }));

    server.Get("/weights", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send(res, 200, weights_json(engine.weight_document(mode_param(req, true))));
    }));

    server.Put("/weights", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto mode = mode_param(req, true);
      json body = parse_body(req);
      if (body.contains("weights")) body = body.at("weights");
      if (!body.is_object()) throw HttpError{400, "weights must be an object"};
      WeightDocument doc{mode, 0, {}};
      for (const auto& [name, value] : body.items()) {
        if (!value.is_number()) throw HttpError{400, "weight for '" + name + "' is not a number"};
        doc.entries.emplace_back(name, value.get<double>());
      }
      try {
        engine.set_weights(mode, weights_from_document(engine.ensemble(mode), doc));
      } catch (const Error& err) {
        send_error(res, 400, to_string(err.code()), err.what());
        return;
      }
      send(res, 200, weights_json(engine.weight_document(mode)));
    }));

    server.Post("/train", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = req.body.empty() ? json::object() : parse_body(req);
      if (!body.contains("mode")) throw HttpError{400, "missing mode"};
      PredictionMode mode;
      std::optional<Standard> standard;
      try {
        mode = parse_mode(body.at("mode").get<std::string>());
        if (body.contains("standard") && !body.at("standard").is_null()) {
          standard = parse_standard(body.at("standard").get<std::string>());
        }
      } catch (const Error& err) {
        throw HttpError{400, err.what()};
      }
      const auto id = engine.start_training(mode, standard);
      send(res, 202, job_json(*engine.job(id)));
    }));

    server.Get(R"(/train/(\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto id = std::stoull(req.matches[1]);
      const auto job = engine.job(id);
      if (!job) throw HttpError{404, "no training job " + std::to_string(id)};
      send(res, 200, job_json(*job));
    }));

    server.Get("/export", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto files = engine.export_files(bool_param(req, "anonymize"));
      json out = json::object();
      for (const auto& [name, content] : files) out[name] = content;
      send(res, 200, json{{"files", out}});
    }));
  }
};

Service::Service(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::io_error, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::io_error, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Service::run() { impl_->server.listen_after_bind(); }

int Service::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  impl_->thread = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace kglf
