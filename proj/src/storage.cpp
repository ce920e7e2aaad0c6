// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/storage.hpp"

#include <sodium.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

namespace kglf {

namespace {

using json = nlohmann::ordered_json;

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict); }

json header(std::string_view kind) {
  json h;
  h["format"] = "kglf-" + std::string(kind);
  h["version"] = kFormatVersion;
  return h;
}

// One parsed record with its origin, for error messages.
class Record {
 public:
  Record(json value, std::string where) : value_(std::move(value)), where_(std::move(where)) {
    if (!value_.is_object()) fail("expected a JSON object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::parse_error, where_ + ": " + what);
  }

  const json& field(const char* key) const {
    auto it = value_.find(key);
    if (it == value_.end()) fail(std::string("missing field '") + key + "'");
    used_.insert(key);
    return *it;
  }

  std::string str(const char* key) const {
    const auto& v = field(key);
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::optional<std::string> optional_str(const char* key) const {
    const auto& v = field(key);
    if (v.is_null()) return std::nullopt;
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string or null");
    return v.get<std::string>();
  }

  std::int64_t integer(const char* key) const {
    const auto& v = field(key);
    if (!v.is_number_integer()) fail(std::string("field '") + key + "' must be an integer");
    return v.get<std::int64_t>();
  }

  double number(const char* key) const {
    const auto& v = field(key);
    if (!v.is_number()) fail(std::string("field '") + key + "' must be a number");
    return v.get<double>();
  }

  bool boolean(const char* key) const {
    const auto& v = field(key);
    if (!v.is_boolean()) fail(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
  }

  // Rejects keys that were never read.
  void finish() const {
    for (const auto& [k, _] : value_.items()) {
      if (!used_.contains(k)) fail("unknown field '" + k + "'");
    }
  }

  const std::string& where() const { return where_; }

 private:
  json value_;
  std::string where_;
  mutable std::set<std::string> used_;
};

// Splits a JSON Lines document, checks its header and returns the records.
std::vector<Record> read_document(const BundleFiles& files, const std::string& name,
                                  std::string_view kind, json* header_out = nullptr) {
  std::vector<Record> out;
  auto it = files.find(name);
  if (it == files.end() || it->second.empty()) return out;

  std::istringstream in(it->second);
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(line_no);
    json value;
    try {
      value = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::parse_error, where + ": column " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!saw_header) {
      Record h(value, where);
      if (h.str("format") != "kglf-" + std::string(kind)) {
        h.fail("expected format 'kglf-" + std::string(kind) + "'");
      }
      if (h.integer("version") != kFormatVersion) {
        h.fail("unsupported version " + std::to_string(h.integer("version")));
      }
      if (header_out) *header_out = value;
      saw_header = true;
      continue;
    }
    out.emplace_back(std::move(value), where);
  }
  return out;
}

template <class F>
auto resolve(const Record& r, F&& lookup, const std::string& id, const char* what) {
  auto found = lookup(id);
  if (!found) {
    throw Error(ErrorCode::unknown_id, r.where() + ": unknown " + std::string(what) + " '" + id + "'");
  }
  return *found;
}

// Re-raises graph errors with the record position prepended.
template <class F>
void at_record(const Record& r, F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    throw Error(e.code(), r.where() + ": " + e.what());
  }
}

std::string hex(const unsigned char* data, std::size_t n) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

// Maps ids and text of protected nodes to pseudonyms while rendering.
class Anonymizer {
 public:
  Anonymizer(const KnowledgeGraph& g, const std::optional<AnonymizationPolicy>& policy) : g_(g) {
    if (!policy) return;
    salt_ = policy->salt;
    std::vector<ConceptIx> roots;
    for (const auto& id : policy->concepts) {
      if (auto c = g.find_concept(id)) roots.push_back(*c);
    }
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
      const auto type = g.node(NodeIx{i}).type;
      const bool hit = std::any_of(roots.begin(), roots.end(), [&](ConceptIx c) { return g.is_a(type, c); });
      if (hit) protected_.insert(NodeIx{i});
    }
  }

  bool active() const { return salt_.has_value(); }
  bool covers(NodeIx u) const { return protected_.contains(u); }

  std::string id(NodeIx u) const {
    return covers(u) ? pseudonym(*salt_, "id:" + g_.node(u).id) : g_.node(u).id;
  }
  std::string text(NodeIx u, const std::string& value) const {
    if (!covers(u) || value.empty()) return value;
    return pseudonym(*salt_, "text:" + value);
  }

 private:
  const KnowledgeGraph& g_;
  std::optional<std::string> salt_;
  std::set<NodeIx> protected_;
};

std::string render_weights(const WeightDocument& doc) {
  json h = header("weights");
  h["mode"] = std::string(to_string(doc.mode));
  h["timestamp"] = doc.timestamp;
  std::string out = dump(h) + "\n";
  for (const auto& [name, w] : doc.entries) {
    json r;
    r["metric"] = name;
    r["weight"] = w;
    out += dump(r) + "\n";
  }
  return out;
}

std::optional<WeightDocument> parse_weights(const BundleFiles& files, const std::string& name,
                                            PredictionMode expected) {
  auto it = files.find(name);
  if (it == files.end() || it->second.empty()) return std::nullopt;
  json h;
  auto records = read_document(files, name, "weights", &h);
  Record hr(h, name + ":1");
  WeightDocument doc;
  hr.str("format");
  hr.integer("version");
  try {
    doc.mode = parse_mode(hr.str("mode"));
  } catch (const Error&) {
    hr.fail("unknown mode");
  }
  if (doc.mode != expected) hr.fail("weights document is for the other prediction mode");
  doc.timestamp = hr.integer("timestamp");
  hr.finish();
  for (const auto& r : records) {
    doc.entries.emplace_back(r.str("metric"), r.number("weight"));
    r.finish();
  }
  return doc;
}

}  // namespace

// -- feedback ------------------------------------------------------------------

void validate_feedback(const KnowledgeGraph& g, const FeedbackEvent& e) {
  g.node(e.subject);
  g.node(e.object);
  if (e.relation) g.relation(*e.relation);
  if (e.mode == PredictionMode::semantic && !e.relation) {
    throw Error(ErrorCode::invalid_argument, "semantic feedback needs a relation");
  }
  if (e.mode == PredictionMode::existence) {
    if (e.accepted && !e.relation) {
      throw Error(ErrorCode::invalid_argument,
                  "accepting an existence recommendation needs one of the compatible relations");
    }
    if (!e.accepted && e.relation) {
      throw Error(ErrorCode::invalid_argument, "existence rejections carry no relation");
    }
  }
  if (e.accepted && !g.schema_allows(e.subject, e.object, *e.relation)) {
    throw Error(ErrorCode::schema_violation, "relation '" + g.relation(*e.relation).id +
                                                 "' is not compatible with the two nodes");
  }
}

ApplyResult apply_feedback(KnowledgeGraph& g, const FeedbackEvent& e, bool idempotent) {
  validate_feedback(g, e);
  if (e.accepted) {
    if (g.has_link(e.subject, e.object, *e.relation)) {
      if (idempotent) return ApplyResult::skipped;
      throw Error(ErrorCode::conflict, "link already exists");
    }
    g.add_link(e.subject, e.object, *e.relation, e.timestamp);
    return ApplyResult::applied;
  }
  if (g.has_non_link(e.subject, e.object, e.relation)) {
    if (idempotent) return ApplyResult::skipped;
    throw Error(ErrorCode::duplicate, "rejection already recorded");
  }
  const bool contradicted = e.relation ? g.has_link(e.subject, e.object, *e.relation)
                                       : g.connected(e.subject, e.object);
  if (contradicted && idempotent) return ApplyResult::skipped;
  g.record_non_link(e.subject, e.object, e.relation, e.timestamp);
  return ApplyResult::applied;
}

void replay_feedback(KnowledgeGraph& g, const std::vector<FeedbackEvent>& events) {
  for (const auto& e : events) apply_feedback(g, e, true);
}

std::string feedback_record(const KnowledgeGraph& g, const FeedbackEvent& e) {
  json r;
  r["subject"] = g.node(e.subject).id;
  r["object"] = g.node(e.object).id;
  r["relation"] = e.relation ? json(g.relation(*e.relation).id) : json(nullptr);
  r["accepted"] = e.accepted;
  r["mode"] = std::string(to_string(e.mode));
  r["timestamp"] = e.timestamp;
  return dump(r);
}

FeedbackLog::FeedbackLog(std::filesystem::path path) : path_(std::move(path)) {
  const bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) throw Error(ErrorCode::io_error, "cannot open " + path_.string() + " for appending");
  if (fresh) {
    out_ << dump(header("feedback")) << '\n';
    out_.flush();
  }
}

void FeedbackLog::append(const KnowledgeGraph& g, const FeedbackEvent& event) {
  out_ << feedback_record(g, event) << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::io_error, "failed to append to " + path_.string());
}

// -- weights -------------------------------------------------------------------

WeightDocument weight_document(const MetricEnsemble& ensemble, const WeightVector& weights,
                               Timestamp timestamp) {
  if (weights.size() != ensemble.size()) {
    throw Error(ErrorCode::invalid_argument, "weight vector length does not match the ensemble");
  }
  WeightDocument doc{ensemble.mode, timestamp, {}};
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    doc.entries.emplace_back(ensemble.instances[i].display_name, weights[i]);
  }
  return doc;
}

WeightVector weights_from_document(const MetricEnsemble& ensemble, const WeightDocument& doc) {
  if (doc.mode != ensemble.mode) {
    throw Error(ErrorCode::invalid_argument, "weights document is for the other prediction mode");
  }
  std::vector<double> raw(ensemble.size(), 0.0);
  std::set<std::string> seen;
  for (const auto& [name, w] : doc.entries) {
    auto ix = ensemble.index_of(name);
    if (!ix) throw Error(ErrorCode::unknown_id, "unknown metric '" + name + "'");
    if (!seen.insert(name).second) throw Error(ErrorCode::duplicate, "metric '" + name + "' listed twice");
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::invalid_argument, "weight of '" + name + "' must be a non-negative number");
    }
    raw[*ix] = w;
  }
  if (std::all_of(raw.begin(), raw.end(), [](double x) { return x == 0.0; })) {
    throw Error(ErrorCode::invalid_argument, "all weights are zero");
  }
  return WeightVector(std::move(raw));
}

// -- anonymization -------------------------------------------------------------

std::string pseudonym(const std::string& salt, const std::string& value) {
  if (sodium_init() < 0) throw Error(ErrorCode::io_error, "libsodium failed to initialize");
  // The salt may be any length; hash it down to a key of the size BLAKE2b accepts.
  unsigned char key[crypto_generichash_KEYBYTES];
  crypto_generichash(key, sizeof key, reinterpret_cast<const unsigned char*>(salt.data()), salt.size(),
                     nullptr, 0);
  unsigned char digest[16];
  crypto_generichash(digest, sizeof digest, reinterpret_cast<const unsigned char*>(value.data()),
                     value.size(), key, sizeof key);
  return "anon-" + hex(digest, sizeof digest);
}

// -- bundles -------------------------------------------------------------------

BundleFiles render_bundle(const GraphBundle& bundle, const std::optional<AnonymizationPolicy>& policy) {
  const KnowledgeGraph& g = bundle.graph;
  const Anonymizer anon(g, policy);
  BundleFiles files;

  std::string ontology = dump(header("ontology")) + "\n";
  for (std::uint32_t i = 1; i < g.concept_count(); ++i) {
    const auto& c = g.concept_at(ConceptIx{i});
    json r;
    r["kind"] = "concept";
    r["id"] = c.id;
    r["label"] = c.label;
    r["parent"] = c.parent ? g.concept_at(*c.parent).id : std::string(KnowledgeGraph::kRootConcept);
    ontology += dump(r) + "\n";
  }
  for (std::uint32_t i = 0; i < g.relation_count(); ++i) {
    const auto& rel = g.relation(RelationIx{i});
    json r;
    r["kind"] = "relation";
    r["id"] = rel.id;
    r["label"] = rel.label;
    r["domain"] = g.concept_at(rel.domain).id;
    r["range"] = g.concept_at(rel.range).id;
    r["inverse_of"] = rel.inverse_of ? json(g.relation(*rel.inverse_of).id) : json(nullptr);
    r["allow_self_loops"] = rel.allow_self_loops;
    ontology += dump(r) + "\n";
  }
  files[bundle_files::kOntology] = std::move(ontology);

  std::string nodes = dump(header("nodes")) + "\n";
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    const NodeIx u{i};
    const auto& n = g.node(u);
    json r;
    r["id"] = anon.id(u);
    r["concept"] = g.concept_at(n.type).id;
    r["label"] = anon.text(u, n.label);
    json attrs = json::object();
    for (const auto& [k, v] : n.attributes) attrs[k] = anon.text(u, v);
    r["attributes"] = std::move(attrs);
    nodes += dump(r) + "\n";
  }
  files[bundle_files::kNodes] = std::move(nodes);

  std::string links = dump(header("links")) + "\n";
  for (const auto& l : g.links()) {
    json r;
    r["subject"] = anon.id(l.subject);
    r["relation"] = g.relation(l.relation).id;
    r["object"] = anon.id(l.object);
    r["timestamp"] = l.timestamp;
    links += dump(r) + "\n";
  }
  files[bundle_files::kLinks] = std::move(links);

  std::string non_links = dump(header("nonlinks")) + "\n";
  for (const auto& nl : g.non_links()) {
    json r;
    r["subject"] = anon.id(nl.subject);
    r["relation"] = nl.relation ? json(g.relation(*nl.relation).id) : json(nullptr);
    r["object"] = anon.id(nl.object);
    r["timestamp"] = nl.timestamp;
    non_links += dump(r) + "\n";
  }
  files[bundle_files::kNonLinks] = std::move(non_links);

  if (bundle.existence_weights) files[bundle_files::kWeightsExistence] = render_weights(*bundle.existence_weights);
  if (bundle.semantic_weights) files[bundle_files::kWeightsSemantic] = render_weights(*bundle.semantic_weights);

  std::string feedback = dump(header("feedback")) + "\n";
  for (const auto& e : bundle.feedback) {
    json r = json::parse(feedback_record(g, e));
    r["subject"] = anon.id(e.subject);
    r["object"] = anon.id(e.object);
    feedback += dump(r) + "\n";
  }
  files[bundle_files::kFeedback] = std::move(feedback);

  json manifest = header("bundle");
  manifest["nodes"] = g.node_count();
  manifest["links"] = g.link_count();
  manifest["non_links"] = g.non_links().size();
  manifest["feedback_events"] = bundle.feedback.size();
  manifest["anonymized"] = anon.active();
  files[bundle_files::kManifest] = dump(manifest) + "\n";
  return files;
}

GraphBundle parse_bundle(const BundleFiles& files) {
  GraphBundle bundle;
  KnowledgeGraph& g = bundle.graph;

  std::vector<std::pair<const Record*, std::string>> inverses;
  const auto ontology = read_document(files, bundle_files::kOntology, "ontology");
  for (const auto& r : ontology) {
    const auto kind = r.str("kind");
    if (kind == "concept") {
      const auto id = r.str("id");
      const auto label = r.str("label");
      const auto parent = r.str("parent");
      r.finish();
      const auto p = resolve(r, [&](const std::string& s) { return g.find_concept(s); }, parent, "concept");
      at_record(r, [&] { g.add_concept(id, label, p); });
    } else if (kind == "relation") {
      const auto id = r.str("id");
      const auto label = r.str("label");
      const auto domain = resolve(r, [&](const std::string& s) { return g.find_concept(s); }, r.str("domain"), "concept");
      const auto range = resolve(r, [&](const std::string& s) { return g.find_concept(s); }, r.str("range"), "concept");
      const auto inverse = r.optional_str("inverse_of");
      const bool loops = r.boolean("allow_self_loops");
      r.finish();
      at_record(r, [&] { g.add_relation(id, label, domain, range, loops); });
      if (inverse) inverses.emplace_back(&r, *inverse);
    } else {
      r.fail("unknown ontology record kind '" + kind + "'");
    }
  }
  for (std::size_t i = 0; i < inverses.size(); ++i) {
    const Record& r = *inverses[i].first;
    const auto self = g.relation_by_id(r.str("id"));
    const auto other = resolve(r, [&](const std::string& s) { return g.find_relation(s); }, inverses[i].second, "relation");
    at_record(r, [&] { g.set_inverse(self, other); });
  }

  auto node_of = [&](const Record& r, const char* key) {
    return resolve(r, [&](const std::string& s) { return g.find_node(s); }, r.str(key), "node");
  };
  auto relation_of = [&](const Record& r, const std::string& id) {
    return resolve(r, [&](const std::string& s) { return g.find_relation(s); }, id, "relation");
  };

  for (const auto& r : read_document(files, bundle_files::kNodes, "nodes")) {
    const auto id = r.str("id");
    const auto type = resolve(r, [&](const std::string& s) { return g.find_concept(s); }, r.str("concept"), "concept");
    const auto label = r.str("label");
    const auto& attrs_json = r.field("attributes");
    if (!attrs_json.is_object()) r.fail("field 'attributes' must be an object");
    std::map<std::string, std::string> attrs;
    for (const auto& [k, v] : attrs_json.items()) {
      if (!v.is_string()) r.fail("attribute '" + k + "' must be a string");
      attrs[k] = v.get<std::string>();
    }
    r.finish();
    at_record(r, [&] { g.add_node(type, id, label, std::move(attrs)); });
  }

  for (const auto& r : read_document(files, bundle_files::kLinks, "links")) {
    const auto u = node_of(r, "subject");
    const auto j = relation_of(r, r.str("relation"));
    const auto v = node_of(r, "object");
    const auto t = r.integer("timestamp");
    r.finish();
    at_record(r, [&] { g.add_link(u, v, j, t); });
  }

  for (const auto& r : read_document(files, bundle_files::kNonLinks, "nonlinks")) {
    const auto u = node_of(r, "subject");
    const auto rel = r.optional_str("relation");
    std::optional<RelationIx> j;
    if (rel) j = relation_of(r, *rel);
    const auto v = node_of(r, "object");
    const auto t = r.integer("timestamp");
    r.finish();
    at_record(r, [&] { g.record_non_link(u, v, j, t); });
  }

  bundle.existence_weights = parse_weights(files, bundle_files::kWeightsExistence, PredictionMode::existence);
  bundle.semantic_weights = parse_weights(files, bundle_files::kWeightsSemantic, PredictionMode::semantic);

  for (const auto& r : read_document(files, bundle_files::kFeedback, "feedback")) {
    FeedbackEvent e;
    e.subject = node_of(r, "subject");
    e.object = node_of(r, "object");
    if (auto rel = r.optional_str("relation")) e.relation = relation_of(r, *rel);
    e.accepted = r.boolean("accepted");
    at_record(r, [&] { e.mode = parse_mode(r.str("mode")); });
    e.timestamp = r.integer("timestamp");
    r.finish();
    at_record(r, [&] { apply_feedback(g, e, true); });
    bundle.feedback.push_back(e);
  }

  if (auto it = files.find(bundle_files::kManifest); it != files.end() && !it->second.empty()) {
    json m;
    try {
      m = json::parse(it->second);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::parse_error, std::string(bundle_files::kManifest) + ": " + e.what());
    }
    Record r(m, bundle_files::kManifest);
    if (r.str("format") != "kglf-bundle") r.fail("expected format 'kglf-bundle'");
    if (r.integer("version") != kFormatVersion) r.fail("unsupported version");
    auto expect = [&](const char* key, std::size_t actual) {
      const auto declared = r.integer(key);
      if (declared != static_cast<std::int64_t>(actual)) {
        r.fail(std::string("declares ") + std::to_string(declared) + " " + key + ", bundle has " +
               std::to_string(actual));
      }
    };
    expect("nodes", g.node_count());
    expect("links", g.link_count());
    expect("non_links", g.non_links().size());
    expect("feedback_events", bundle.feedback.size());
    r.boolean("anonymized");
    r.finish();
  }
  return bundle;
}

GraphBundle import_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::io_error, "bundle directory '" + dir.string() + "' does not exist");
  }
  BundleFiles files;
  for (const char* name : {bundle_files::kManifest, bundle_files::kOntology, bundle_files::kNodes,
                           bundle_files::kLinks, bundle_files::kNonLinks, bundle_files::kWeightsExistence,
                           bundle_files::kWeightsSemantic, bundle_files::kFeedback}) {
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    files[name] = buf.str();
  }
  return parse_bundle(files);
}

void export_bundle(const GraphBundle& bundle, const std::filesystem::path& dir,
                   const std::optional<AnonymizationPolicy>& policy) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : render_bundle(bundle, policy)) {
    // Write next to the target and rename so readers never see half a file.
    const auto path = dir / name;
    const auto tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      if (!out) throw Error(ErrorCode::io_error, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot replace " + path.string() + ": " + ec.message());
  }
}

}  // namespace kglf
