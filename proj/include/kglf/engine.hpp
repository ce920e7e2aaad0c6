// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors
//
// The builder loop behind the HTTP service: recommendations out, feedback
// in, weights per mode, retraining on schedule or demand.

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "kglf/learning.hpp"
#include "kglf/predictor.hpp"
#include "kglf/storage.hpp"

namespace kglf {

struct EngineConfig {
  std::size_t retrain_every = 200;  // 0 disables automatic retraining
  std::size_t candidate_size = 30;
  std::size_t training_size = 200;  // upper bound, shrinks to the data available
  std::uint64_t seed = 0;
  GPConfig gp;
  // Run training jobs inline instead of on a worker thread (deterministic
  // simulations and tests).
  bool synchronous_training = false;
  std::optional<std::filesystem::path> bundle_dir;  // persistence target
  std::string anonymize_salt;                       // empty: random per process
  std::set<std::string> anonymize_concepts = {"Person"};
};

// The retraining policy shared by the service and the simulator. Up to
// `max_size` instances, shrunk to what the graph supplies; without an
// explicit standard, gold when the recorded rejections fill half the set,
// silver otherwise (the note then records the downgrade).
std::pair<TrainingSet, std::string> policy_training_set(const KnowledgeGraph& g, PredictionMode mode,
                                                        std::optional<Standard> standard,
                                                        std::size_t max_size, std::uint64_t seed,
                                                        const std::set<LinkKey>& accepted = {});

enum class JobStatus { queued, running, done, failed };
std::string_view to_string(JobStatus status);

struct TrainJob {
  std::uint64_t id = 0;
  PredictionMode mode = PredictionMode::existence;
  Standard standard = Standard::silver;
  JobStatus status = JobStatus::queued;
  std::size_t training_size = 0;
  std::optional<GPRunReport> report;
  std::string note;  // e.g. a gold request downgraded to silver
  std::string error;
};

struct RecommendationItem {
  Recommendation rec;
  // Existence mode: relations a reviewer may pick, as (subject, object, j).
  std::vector<LinkKey> compatible;
};

struct GraphSummary {
  std::size_t nodes = 0;
  std::size_t links = 0;
  std::size_t non_links = 0;
  std::vector<std::pair<std::string, std::size_t>> links_per_relation;
  std::vector<std::pair<std::string, std::size_t>> nodes_per_concept;
  std::size_t feedback_total = 0;
  std::size_t feedback_accepted = 0;
  std::size_t feedback_rejected = 0;
};

class Engine {
 public:
  explicit Engine(GraphBundle bundle, EngineConfig config = {});
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const EngineConfig& config() const { return config_; }

  std::vector<RecommendationItem> recommend(const std::string& node_id, PredictionMode mode,
                                            std::size_t k, bool interleave);
  // Same, with a caller-chosen seed for candidate sampling and interleaving.
  std::vector<RecommendationItem> recommend(NodeIx node, PredictionMode mode, std::size_t k,
                                            bool interleave, std::uint64_t seed);

  struct FeedbackOutcome {
    std::size_t feedback_count = 0;
    std::optional<std::uint64_t> train_job;  // set when the threshold fired
  };
  FeedbackOutcome submit_feedback(const FeedbackEvent& event);
  std::vector<FeedbackEvent> recent_feedback(std::size_t limit) const;

  WeightVector weights(PredictionMode mode) const;
  WeightDocument weight_document(PredictionMode mode) const;
  void set_weights(PredictionMode mode, const WeightVector& weights);
  const MetricEnsemble& ensemble(PredictionMode mode) const;

  // Builds the training set now; the GP runs in the background unless the
  // engine is synchronous. Throws conflict when a job for `mode` is running
  // and insufficient_data when the graph cannot fill a training set.
  std::uint64_t start_training(PredictionMode mode, std::optional<Standard> standard = std::nullopt);
  std::optional<TrainJob> job(std::uint64_t id) const;
  void wait_for_jobs();

  GraphSummary summary() const;
  std::vector<NodeIx> nodes(std::optional<std::string> concept_id) const;
  BundleFiles export_files(bool anonymize) const;

  // Read access to the live graph under the engine's lock.
  template <class F>
  auto with_graph(F&& fn) const {
    std::shared_lock lock(graph_mutex_);
    return fn(bundle_.graph);
  }

 private:
  struct ModeState {
    MetricEnsemble ensemble;
    WeightVector weights;
    Timestamp updated = 0;
    std::optional<std::uint64_t> running_job;
  };

  ModeState& state(PredictionMode mode) { return mode == PredictionMode::existence ? existence_ : semantic_; }
  const ModeState& state(PredictionMode mode) const {
    return mode == PredictionMode::existence ? existence_ : semantic_;
  }
  void run_job(std::uint64_t id, KnowledgeGraph snapshot, TrainingSet set);
  void persist_weights(PredictionMode mode);
  void persist_manifest();

  EngineConfig config_;
  mutable std::shared_mutex graph_mutex_;
  GraphBundle bundle_;
  std::unique_ptr<FeedbackLog> log_;
  std::uint64_t request_counter_ = 0;

  mutable std::mutex weights_mutex_;
  ModeState existence_;
  ModeState semantic_;

  mutable std::mutex jobs_mutex_;
  std::map<std::uint64_t, TrainJob> jobs_;
  std::uint64_t next_job_ = 1;
  std::vector<std::thread> workers_;
};

}  // namespace kglf
