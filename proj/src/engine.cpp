// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/engine.hpp"

#include <sodium.h>

#include <algorithm>
#include <chrono>

namespace kglf {

namespace {

Timestamp now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string random_salt() {
  if (sodium_init() < 0) throw Error(ErrorCode::io_error, "libsodium failed to initialize");
  unsigned char buf[16];
  randombytes_buf(buf, sizeof buf);
  char hex[sizeof buf * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, buf, sizeof buf);
  return hex;
}

std::size_t positive_pool(const KnowledgeGraph& g, PredictionMode mode) {
  if (mode == PredictionMode::semantic) return g.link_count();
  std::set<std::pair<NodeIx, NodeIx>> pairs;
  for (const auto& l : g.links()) {
    if (l.subject == l.object) continue;
    pairs.emplace(std::min(l.subject, l.object), std::max(l.subject, l.object));
  }
  return pairs.size();
}

}  // namespace

std::pair<TrainingSet, std::string> policy_training_set(const KnowledgeGraph& g, PredictionMode mode,
                                                        std::optional<Standard> standard,
                                                        std::size_t max_size, std::uint64_t seed,
                                                        const std::set<LinkKey>& accepted) {
  const std::size_t cap = max_size / 2;
  const std::size_t gold_pool = gold_negative_pool(g, mode);
  const Standard chosen = standard.value_or(gold_pool >= cap ? Standard::gold : Standard::silver);
  std::string note;
  if (!standard && chosen == Standard::silver) {
    note = "silver standard: " + std::to_string(gold_pool) + " recorded rejections, gold needs " +
           std::to_string(cap);
  }
  std::size_t half = std::min(cap, positive_pool(g, mode));
  half = std::min(half, chosen == Standard::gold ? gold_pool : silver_negative_pool(g, mode));
  if (half == 0) {
    throw Error(ErrorCode::insufficient_data,
                chosen == Standard::gold ? "gold standard needs recorded rejections"
                                         : "graph has no links or no unobserved pairs to train on");
  }
  return {build_training_set(g, mode, chosen, 2 * half, seed, accepted), std::move(note)};
}

std::string_view to_string(JobStatus status) {
  switch (status) {
    case JobStatus::queued: return "queued";
    case JobStatus::running: return "running";
    case JobStatus::done: return "done";
    case JobStatus::failed: return "failed";
  }
  return "unknown";
}

Engine::Engine(GraphBundle bundle, EngineConfig config)
    : config_(std::move(config)), bundle_(std::move(bundle)) {
  if (config_.candidate_size < 2) {
    throw Error(ErrorCode::invalid_argument, "candidate size must be at least 2");
  }
  config_.gp.validate();
  if (config_.anonymize_salt.empty()) config_.anonymize_salt = random_salt();

  existence_.ensemble = default_ensemble(PredictionMode::existence);
  semantic_.ensemble = default_ensemble(PredictionMode::semantic);
  for (auto* s : {&existence_, &semantic_}) s->weights = WeightVector::uniform(s->ensemble.size());
  if (bundle_.existence_weights) {
    existence_.weights = weights_from_document(existence_.ensemble, *bundle_.existence_weights);
    existence_.updated = bundle_.existence_weights->timestamp;
  }
  if (bundle_.semantic_weights) {
    semantic_.weights = weights_from_document(semantic_.ensemble, *bundle_.semantic_weights);
    semantic_.updated = bundle_.semantic_weights->timestamp;
  }
  if (config_.bundle_dir) {
    std::filesystem::create_directories(*config_.bundle_dir);
    if (!std::filesystem::exists(*config_.bundle_dir / bundle_files::kNodes)) {
      export_bundle(bundle_, *config_.bundle_dir);
    }
    log_ = std::make_unique<FeedbackLog>(*config_.bundle_dir / bundle_files::kFeedback);
  }
}

Engine::~Engine() { wait_for_jobs(); }

const MetricEnsemble& Engine::ensemble(PredictionMode mode) const { return state(mode).ensemble; }

std::vector<RecommendationItem> Engine::recommend(const std::string& node_id, PredictionMode mode,
                                                  std::size_t k, bool interleave) {
  NodeIx u;
  std::uint64_t counter;
  {
    std::unique_lock lock(graph_mutex_);
    u = bundle_.graph.node_by_id(node_id);
    counter = request_counter_++;
  }
  return recommend(u, mode, k, interleave, mix_seed(config_.seed, counter));
}

std::vector<RecommendationItem> Engine::recommend(NodeIx u, PredictionMode mode, std::size_t k,
                                                  bool interleave, std::uint64_t seed) {
  const WeightVector w = weights(mode);
  const auto& ens = state(mode).ensemble;
  std::shared_lock lock(graph_mutex_);
  const auto& g = bundle_.graph;
  g.node(u);  // validates the index
  if (k > config_.candidate_size) {
    throw Error(ErrorCode::invalid_argument,
                "k exceeds the candidate size " + std::to_string(config_.candidate_size));
  }

  std::vector<Recommendation> recs;
  if (k > 0) {
    std::vector<Recommendation> ranked;
    if (mode == PredictionMode::existence) {
      ranked = rank_existence(g, existence_candidates(g, u, config_.candidate_size, seed), ens, w);
    } else {
      ranked = rank_semantic(g, semantic_candidates(g, u, config_.candidate_size, seed), ens, w);
    }
    if (interleave) {
      recs = interleave_for_review(ranked, ranked, k, mix_seed(seed, 1));
    } else {
      if (ranked.size() > k) ranked.resize(k);
      recs = std::move(ranked);
    }
  }

  std::vector<RecommendationItem> items;
  items.reserve(recs.size());
  for (auto& r : recs) {
    RecommendationItem item{r, {}};
    if (mode == PredictionMode::existence) {
      for (auto j : g.compatible_relations(r.subject, r.object)) item.compatible.push_back({r.subject, r.object, j});
      for (auto j : g.compatible_relations(r.object, r.subject)) item.compatible.push_back({r.object, r.subject, j});
    }
    items.push_back(std::move(item));
  }
  return items;
}

Engine::FeedbackOutcome Engine::submit_feedback(const FeedbackEvent& event) {
  FeedbackOutcome out;
  {
    std::unique_lock lock(graph_mutex_);
    apply_feedback(bundle_.graph, event);
    bundle_.feedback.push_back(event);
    if (log_) {
      log_->append(bundle_.graph, event);
      persist_manifest();
    }
    out.feedback_count = bundle_.feedback.size();
  }
  if (config_.retrain_every > 0 && out.feedback_count % config_.retrain_every == 0) {
    try {
      out.train_job = start_training(event.mode);
    } catch (const Error& e) {
      // A running job or a graph too small to train on just defers retraining.
      if (e.code() != ErrorCode::conflict && e.code() != ErrorCode::insufficient_data) throw;
    }
  }
  return out;
}

std::vector<FeedbackEvent> Engine::recent_feedback(std::size_t limit) const {
  std::shared_lock lock(graph_mutex_);
  const auto& fb = bundle_.feedback;
  const std::size_t from = fb.size() > limit ? fb.size() - limit : 0;
  return {fb.begin() + static_cast<std::ptrdiff_t>(from), fb.end()};
}

WeightVector Engine::weights(PredictionMode mode) const {
  std::lock_guard lock(weights_mutex_);
  return state(mode).weights;
}

WeightDocument Engine::weight_document(PredictionMode mode) const {
  std::lock_guard lock(weights_mutex_);
  const auto& s = state(mode);
  return kglf::weight_document(s.ensemble, s.weights, s.updated);
}

void Engine::set_weights(PredictionMode mode, const WeightVector& w) {
  std::lock_guard lock(weights_mutex_);
  auto& s = state(mode);
  if (w.size() != s.ensemble.size() || !w.on_simplex()) {
    throw Error(ErrorCode::invalid_argument, "weight vector does not fit the ensemble");
  }
  s.weights = w;
  s.updated = now_ms();
  persist_weights(mode);
}

std::uint64_t Engine::start_training(PredictionMode mode, std::optional<Standard> standard) {
  KnowledgeGraph snapshot;
  std::set<LinkKey> accepted;
  {
    std::shared_lock lock(graph_mutex_);
    snapshot = bundle_.graph;
    for (const auto& e : bundle_.feedback) {
      if (e.accepted && e.relation) accepted.insert({e.subject, e.object, *e.relation});
    }
  }

  std::uint64_t id;
  {
    std::lock_guard lock(jobs_mutex_);
    std::lock_guard wlock(weights_mutex_);
    if (state(mode).running_job) {
      throw Error(ErrorCode::conflict, "a " + std::string(to_string(mode)) + " training job is already running");
    }
    id = next_job_++;
  }

  auto [set, note] = policy_training_set(snapshot, mode, standard, config_.training_size,
                                         mix_seed(config_.seed, 1000 + id), accepted);
  const Standard chosen = set.standard;

  {
    std::lock_guard lock(jobs_mutex_);
    std::lock_guard wlock(weights_mutex_);
    if (state(mode).running_job) {
      throw Error(ErrorCode::conflict, "a " + std::string(to_string(mode)) + " training job is already running");
    }
    state(mode).running_job = id;
    jobs_[id] = TrainJob{id, mode, chosen, JobStatus::queued, set.size(), std::nullopt, note, {}};
  }

  if (config_.synchronous_training) {
    run_job(id, std::move(snapshot), std::move(set));
  } else {
    std::lock_guard lock(jobs_mutex_);
    workers_.emplace_back([this, id, snap = std::move(snapshot), s = std::move(set)]() mutable {
      run_job(id, std::move(snap), std::move(s));
    });
  }
  return id;
}

void Engine::run_job(std::uint64_t id, KnowledgeGraph snapshot, TrainingSet set) {
  PredictionMode mode;
  {
    std::lock_guard lock(jobs_mutex_);
    auto& job = jobs_.at(id);
    job.status = JobStatus::running;
    mode = job.mode;
  }
  std::optional<GPRunReport> report;
  std::string error;
  try {
    GPConfig gp = config_.gp;
    gp.seed = mix_seed(config_.gp.seed, id);
    report = run_gp(state(mode).ensemble, set, snapshot, gp);
  } catch (const std::exception& e) {
    error = e.what();
  }

  std::lock_guard lock(jobs_mutex_);
  std::lock_guard wlock(weights_mutex_);
  auto& job = jobs_.at(id);
  auto& s = state(mode);
  if (report) {
    s.weights = report->best_weights;
    s.updated = now_ms();
    try {
      persist_weights(mode);
    } catch (const std::exception& e) {
      error = e.what();
    }
    job.report = std::move(report);
  }
  job.status = error.empty() ? JobStatus::done : JobStatus::failed;
  job.error = error;
  s.running_job.reset();
}

std::optional<TrainJob> Engine::job(std::uint64_t id) const {
  std::lock_guard lock(jobs_mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

void Engine::wait_for_jobs() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(jobs_mutex_);
    workers.swap(workers_);
  }
  for (auto& t : workers) {
    if (t.joinable()) t.join();
  }
}

GraphSummary Engine::summary() const {
  std::shared_lock lock(graph_mutex_);
  const auto& g = bundle_.graph;
  GraphSummary s;
  s.nodes = g.node_count();
  s.links = g.link_count();
  s.non_links = g.non_links().size();
  for (std::uint32_t j = 0; j < g.relation_count(); ++j) {
    s.links_per_relation.emplace_back(g.relation(RelationIx{j}).id, g.link_count(RelationIx{j}));
  }
  for (std::uint32_t c = 1; c < g.concept_count(); ++c) {
    s.nodes_per_concept.emplace_back(g.concept_at(ConceptIx{c}).id,
                                     g.nodes_of_concept(ConceptIx{c}, false).size());
  }
  s.feedback_total = bundle_.feedback.size();
  s.feedback_accepted = static_cast<std::size_t>(
      std::count_if(bundle_.feedback.begin(), bundle_.feedback.end(), [](const auto& e) { return e.accepted; }));
  s.feedback_rejected = s.feedback_total - s.feedback_accepted;
  return s;
}

std::vector<NodeIx> Engine::nodes(std::optional<std::string> concept_id) const {
  std::shared_lock lock(graph_mutex_);
  const auto& g = bundle_.graph;
  if (concept_id) return g.nodes_of_concept(g.concept_by_id(*concept_id));
  std::vector<NodeIx> all;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) all.push_back(NodeIx{i});
  return all;
}

BundleFiles Engine::export_files(bool anonymize) const {
  GraphBundle copy;
  {
    std::shared_lock lock(graph_mutex_);
    copy = bundle_;
  }
  copy.existence_weights = weight_document(PredictionMode::existence);
  copy.semantic_weights = weight_document(PredictionMode::semantic);
  if (!anonymize) return render_bundle(copy);
  return render_bundle(copy, AnonymizationPolicy{config_.anonymize_salt, config_.anonymize_concepts});
}

// Callers hold weights_mutex_.
void Engine::persist_weights(PredictionMode mode) {
  if (!config_.bundle_dir) return;
  GraphBundle only;
  const auto& s = state(mode);
  auto doc = kglf::weight_document(s.ensemble, s.weights, s.updated);
  if (mode == PredictionMode::existence) {
    only.existence_weights = std::move(doc);
  } else {
    only.semantic_weights = std::move(doc);
  }
  const auto name = mode == PredictionMode::existence ? bundle_files::kWeightsExistence
                                                      : bundle_files::kWeightsSemantic;
  const auto path = *config_.bundle_dir / name;
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << render_bundle(only).at(name);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// Callers hold graph_mutex_ exclusively.
void Engine::persist_manifest() {
  const auto files = render_bundle(bundle_);
  const auto path = *config_.bundle_dir / bundle_files::kManifest;
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << files.at(bundle_files::kManifest);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace kglf
