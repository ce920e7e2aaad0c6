// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors
//
// Bundle directories: one JSON Lines document per entity kind, see
// docs/FORMAT.md for the byte-level layout.

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kglf/graph.hpp"
#include "kglf/metrics.hpp"
#include "kglf/weights.hpp"

namespace kglf {

inline constexpr int kFormatVersion = 1;

struct FeedbackEvent {
  NodeIx subject;
  NodeIx object;
  std::optional<RelationIx> relation;
  bool accepted = false;
  Timestamp timestamp = 0;
  PredictionMode mode = PredictionMode::existence;
};

// Checks ids and the relation rules: semantic events and existence
// acceptances carry a relation, existence rejections do not.
void validate_feedback(const KnowledgeGraph& g, const FeedbackEvent& event);

enum class ApplyResult { applied, skipped };

// Accepts add a link, rejects record a non-link (relation-less for existence
// rejections). With `idempotent`, events the graph already reflects are
// skipped instead of raising duplicate/conflict.
ApplyResult apply_feedback(KnowledgeGraph& g, const FeedbackEvent& event, bool idempotent = false);

// Applies `events` in order with idempotent semantics.
void replay_feedback(KnowledgeGraph& g, const std::vector<FeedbackEvent>& events);

// Metric name -> weight, in ensemble order when produced by this library.
struct WeightDocument {
  PredictionMode mode = PredictionMode::existence;
  Timestamp timestamp = 0;
  std::vector<std::pair<std::string, double>> entries;
};

WeightDocument weight_document(const MetricEnsemble& ensemble, const WeightVector& weights,
                               Timestamp timestamp);
// Names missing from the document count as zero; unknown names, negative or
// non-finite values and an all-zero document are rejected.
WeightVector weights_from_document(const MetricEnsemble& ensemble, const WeightDocument& doc);

struct GraphBundle {
  KnowledgeGraph graph;
  std::optional<WeightDocument> existence_weights;
  std::optional<WeightDocument> semantic_weights;
  std::vector<FeedbackEvent> feedback;
};

struct AnonymizationPolicy {
  std::string salt;
  std::set<std::string> concepts = {"Person"};  // descendants included
};

// Keyed BLAKE2b of `value`, hex encoded with an "anon-" prefix.
std::string pseudonym(const std::string& salt, const std::string& value);

namespace bundle_files {
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kOntology = "ontology.jsonl";
inline constexpr const char* kNodes = "nodes.jsonl";
inline constexpr const char* kLinks = "links.jsonl";
inline constexpr const char* kNonLinks = "nonlinks.jsonl";
inline constexpr const char* kWeightsExistence = "weights.existence.jsonl";
inline constexpr const char* kWeightsSemantic = "weights.semantic.jsonl";
inline constexpr const char* kFeedback = "feedback.log";
}  // namespace bundle_files

using BundleFiles = std::map<std::string, std::string>;

BundleFiles render_bundle(const GraphBundle& bundle,
                          const std::optional<AnonymizationPolicy>& policy = std::nullopt);
// Missing documents are treated as empty. Feedback is replayed onto the
// loaded graph; the manifest counts, when present, are checked afterwards.
GraphBundle parse_bundle(const BundleFiles& files);

GraphBundle import_bundle(const std::filesystem::path& dir);
void export_bundle(const GraphBundle& bundle, const std::filesystem::path& dir,
                   const std::optional<AnonymizationPolicy>& policy = std::nullopt);

std::string feedback_record(const KnowledgeGraph& g, const FeedbackEvent& event);

// Append-only writer for a bundle's feedback log. Writes the header when the
// file is new or empty and flushes after each record.
class FeedbackLog {
 public:
  explicit FeedbackLog(std::filesystem::path path);

  void append(const KnowledgeGraph& g, const FeedbackEvent& event);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace kglf
