// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <numeric>

#include "kglf/candidates.hpp"
#include "kglf/random.hpp"

namespace kglf {

namespace {

using json = nlohmann::ordered_json;

constexpr Timestamp kEpoch = 1767225600000;  // 2026-01-01T00:00:00Z
constexpr Timestamp kStep = 15 * 60 * 1000;  // one link every 15 minutes

std::pair<NodeIx, NodeIx> pair_of(NodeIx a, NodeIx b) { return {std::min(a, b), std::max(a, b)}; }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string padded(std::size_t i, std::size_t width) {
  auto s = std::to_string(i);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

template <class T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

// Draws an index with probability proportional to weights[i].
std::size_t pick_weighted(const std::vector<double>& weights, Rng& rng) {
  std::discrete_distribution<std::size_t> d(weights.begin(), weights.end());
  return d(rng);
}

class Planter {
 public:
  Planter(KnowledgeGraph& g, Rng& rng) : g_(g), rng_(rng) {}

  // Adds a link between u and v with a uniformly chosen schema-valid
  // orientation and relation. False when the pair is taken or incompatible.
  bool link_pair(NodeIx u, NodeIx v) {
    if (u == v || g_.connected(u, v)) return false;
    std::vector<LinkKey> options;
    for (auto j : g_.compatible_relations(u, v)) options.push_back({u, v, j});
    for (auto j : g_.compatible_relations(v, u)) options.push_back({v, u, j});
    if (options.empty()) return false;
    const auto& o = pick(options, rng_);
    add(o.subject, o.object, o.relation);
    return true;
  }

  void add(NodeIx u, NodeIx v, RelationIx j) {
    g_.add_link(u, v, j, kEpoch + static_cast<Timestamp>(g_.link_count()) * kStep);
  }

  bool triadic_closure() {
    const auto& links = g_.links();
    if (links.empty()) return false;
    const auto& l = pick(links, rng_);
    const bool flip = std::bernoulli_distribution(0.5)(rng_);
    const NodeIx u = flip ? l.object : l.subject;
    const NodeIx w = flip ? l.subject : l.object;
    const auto second = g_.neighbors(w);
    return link_pair(u, pick(second, rng_));
  }

  // Relation-specific preferential attachment: popular relations and the
  // nodes already carrying many links of that relation attract more.
  bool type_affinity() {
    std::vector<double> rel_weight;
    for (std::uint32_t j = 0; j < g_.relation_count(); ++j) {
      rel_weight.push_back(static_cast<double>(g_.link_count(RelationIx{j})) + 1.0);
    }
    const RelationIx j{static_cast<std::uint32_t>(pick_weighted(rel_weight, rng_))};
    const auto& r = g_.relation(j);
    const auto subjects = g_.nodes_of_concept(r.domain);
    const auto objects = g_.nodes_of_concept(r.range);
    if (subjects.empty() || objects.empty()) return false;
    auto weights_of = [&](const std::vector<NodeIx>& nodes) {
      std::vector<double> w;
      for (auto n : nodes) w.push_back(static_cast<double>(g_.degree(n, j)) + 1.0);
      return w;
    };
    const NodeIx u = subjects[pick_weighted(weights_of(subjects), rng_)];
    const NodeIx v = objects[pick_weighted(weights_of(objects), rng_)];
    if (u == v || g_.connected(u, v) || !g_.schema_allows(u, v, j)) return false;
    add(u, v, j);
    return true;
  }

  // Links between endpoints of the most recent links.
  bool temporal_recency() {
    const auto& links = g_.links();
    if (links.size() < 2) return false;
    const std::size_t window = std::min<std::size_t>(10, links.size());
    std::vector<NodeIx> recent;
    for (std::size_t i = links.size() - window; i < links.size(); ++i) {
      recent.push_back(links[i].subject);
      recent.push_back(links[i].object);
    }
    return link_pair(pick(recent, rng_), pick(recent, rng_));
  }

  bool uniform() {
    const auto n = static_cast<std::uint32_t>(g_.node_count());
    std::uniform_int_distribution<std::uint32_t> d(0, n - 1);
    return link_pair(NodeIx{d(rng_)}, NodeIx{d(rng_)});
  }

 private:
  KnowledgeGraph& g_;
  Rng& rng_;
};

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

double mean(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

double fraction(std::size_t hits, std::size_t reviews) {
  return reviews == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(reviews);
}

}  // namespace

// -- generation ------------------------------------------------------------------

void SyntheticSpec::validate() const {
  if (concepts.empty()) throw Error(ErrorCode::invalid_argument, "spec needs at least one concept");
  std::set<std::string> ids;
  for (const auto& [id, count] : concepts) {
    if (!ids.insert(id).second) throw Error(ErrorCode::invalid_argument, "duplicate concept '" + id + "'");
  }
  if (relations.empty()) throw Error(ErrorCode::invalid_argument, "spec needs at least one relation");
  for (const auto& r : relations) {
    if (!ids.contains(r.domain) || !ids.contains(r.range)) {
      throw Error(ErrorCode::invalid_argument, "relation '" + r.id + "' names an unknown concept");
    }
  }
  const double mix[] = {triadic_closure, type_affinity, temporal_recency};
  for (double m : mix) {
    if (!(m >= 0.0)) throw Error(ErrorCode::invalid_argument, "mechanism weights must be non-negative");
  }
  if (std::abs(triadic_closure + type_affinity + temporal_recency - 1.0) > 1e-9) {
    throw Error(ErrorCode::invalid_argument, "mechanism weights must sum to 1");
  }
  if (!(holdout > 0.0 && holdout < 1.0)) throw Error(ErrorCode::invalid_argument, "holdout must lie in (0, 1)");
  if (links == 0) throw Error(ErrorCode::invalid_argument, "spec needs at least one link");
}

SyntheticGraph generate(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  KnowledgeGraph g;
  for (const auto& [id, count] : spec.concepts) g.add_concept(id, id);
  for (const auto& r : spec.relations) {
    g.add_relation(r.id, r.id, g.concept_by_id(r.domain), g.concept_by_id(r.range));
  }
  for (const auto& [id, count] : spec.concepts) {
    const auto c = g.concept_by_id(id);
    const auto width = std::max<std::size_t>(3, std::to_string(count).size());
    for (std::size_t i = 1; i <= count; ++i) {
      g.add_node(c, lower(id) + "-" + padded(i, width), id + " " + std::to_string(i));
    }
  }

  // Pairs the schema admits, either orientation.
  std::size_t capacity = 0;
  for (std::uint32_t a = 0; a < g.node_count(); ++a) {
    for (std::uint32_t b = a + 1; b < g.node_count(); ++b) {
      const NodeIx u{a}, v{b};
      if (!g.compatible_relations(u, v).empty() || !g.compatible_relations(v, u).empty()) ++capacity;
    }
  }
  if (capacity == 0) throw Error(ErrorCode::invalid_argument, "the schema admits no links between the spec's nodes");
  if (spec.links > capacity) {
    throw Error(ErrorCode::invalid_argument, "spec asks for " + std::to_string(spec.links) +
                                                 " links but the schema admits " + std::to_string(capacity) + " pairs");
  }

  Planter planter(g, rng);
  // Every node starts with one link when the schema allows it.
  std::vector<NodeIx> order;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) order.push_back(NodeIx{i});
  std::shuffle(order.begin(), order.end(), rng);
  for (auto u : order) {
    if (g.link_count() >= spec.links) break;
    if (g.degree(u) > 0) continue;
    std::vector<NodeIx> partners;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
      const NodeIx v{i};
      if (v != u && !g.connected(u, v) &&
          (!g.compatible_relations(u, v).empty() || !g.compatible_relations(v, u).empty())) {
        partners.push_back(v);
      }
    }
    if (!partners.empty()) planter.link_pair(u, pick(partners, rng));
  }

  const std::vector<double> mix = {spec.triadic_closure, spec.type_affinity, spec.temporal_recency};
  std::size_t failures = 0;
  while (g.link_count() < spec.links) {
    bool placed = false;
    const auto mechanism = pick_weighted(mix, rng);
    for (int attempt = 0; attempt < 20 && !placed; ++attempt) {
      placed = mechanism == 0 ? planter.triadic_closure()
             : mechanism == 1 ? planter.type_affinity()
                              : planter.temporal_recency();
    }
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) placed = planter.uniform();
    if (!placed && ++failures > 1000) {
      throw Error(ErrorCode::insufficient_data, "could not place " + std::to_string(spec.links) + " links");
    }
  }

  SyntheticGraph out;
  out.full_link_count = g.link_count();
  const auto hidden_count = static_cast<std::size_t>(std::llround(spec.holdout * static_cast<double>(g.link_count())));
  std::vector<Link> links = g.links();
  std::shuffle(links.begin(), links.end(), rng);
  links.resize(hidden_count);
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.timestamp < b.timestamp; });
  for (const auto& l : links) g.remove_link(l.subject, l.object, l.relation);
  out.visible = std::move(g);
  out.hidden = std::move(links);
  return out;
}

// -- simulation ------------------------------------------------------------------

void SimulationConfig::validate() const {
  if (budget == 0) throw Error(ErrorCode::invalid_argument, "feedback budget must be at least 1");
  if (k == 0) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
  if (candidate_size < 2 || k > candidate_size) {
    throw Error(ErrorCode::invalid_argument, "need 2 <= candidate size and k <= candidate size");
  }
  if (training_size < 2) throw Error(ErrorCode::invalid_argument, "training size must be at least 2");
  if (scoring == Scoring::fixed && !fixed_weights) {
    throw Error(ErrorCode::invalid_argument, "fixed scoring needs a weight vector");
  }
  gp.validate();
}

ExperimentReport simulate(const KnowledgeGraph& visible, const std::vector<Link>& hidden,
                          const SimulationConfig& config) {
  config.validate();
  if (hidden.empty()) throw Error(ErrorCode::insufficient_data, "empty hidden set");
  const auto ensemble = default_ensemble(PredictionMode::existence);
  WeightVector weights = WeightVector::uniform(ensemble.size());
  if (config.scoring == Scoring::fixed) {
    if (config.fixed_weights->size() != ensemble.size()) {
      throw Error(ErrorCode::invalid_argument, "fixed weights do not fit the existence ensemble");
    }
    weights = *config.fixed_weights;
  }

  KnowledgeGraph g = visible;
  std::map<std::pair<NodeIx, NodeIx>, Link> oracle;
  std::vector<std::size_t> remaining(g.node_count(), 0);
  for (const auto& l : hidden) {
    g.node(l.subject);
    g.node(l.object);
    if (g.connected(l.subject, l.object)) {
      throw Error(ErrorCode::invalid_argument, "hidden link " + g.node(l.subject).id + " - " +
                                                   g.node(l.object).id + " is already visible");
    }
    if (oracle.emplace(pair_of(l.subject, l.object), l).second) {
      ++remaining[l.subject.value];
      ++remaining[l.object.value];
    }
  }

  ExperimentReport rep;
  rep.seed = config.seed;
  rep.feedback_budget = config.budget;
  for (const auto& m : ensemble.instances) rep.metric_names.push_back(m.display_name);

  std::set<LinkKey> accepted;
  Timestamp clock = g.latest_timestamp().value_or(kEpoch);
  const std::size_t n = g.node_count();
  std::size_t cursor = 0;
  std::size_t idle = 0;  // consecutive targets without candidates
  std::uint64_t request = 0;

  while (rep.events < config.budget && !oracle.empty() && idle < n) {
    while (remaining[cursor % n] == 0) ++cursor;
    const NodeIx u{static_cast<std::uint32_t>(cursor % n)};
    ++cursor;

    const auto seed = mix_seed(config.seed, request++);
    const auto set = existence_candidates(g, u, config.candidate_size, seed);
    if (set.candidates.empty()) {
      ++idle;
      continue;
    }
    idle = 0;
    auto ranked = rank_existence(g, set, ensemble, weights);
    if (config.scoring == Scoring::zero) {
      auto other_id = [&](const Recommendation& r) -> const std::string& {
        return g.node(r.subject == u ? r.object : r.subject).id;
      };
      std::sort(ranked.begin(), ranked.end(),
                [&](const Recommendation& a, const Recommendation& b) { return other_id(a) < other_id(b); });
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        ranked[i].score = 0.0;
        ranked[i].rank = i + 1;
      }
    }
    const auto items = interleave_for_review(ranked, ranked, std::min(config.k, ranked.size()),
                                             mix_seed(seed, 1));

    for (const auto& r : items) {
      if (rep.events >= config.budget) break;
      const NodeIx v = r.subject == u ? r.object : r.subject;
      const auto hit = oracle.find(pair_of(u, v));
      const bool positive = hit != oracle.end();
      if (r.source == Source::genetic) {
        ++rep.genetic_reviews;
        rep.genetic_hits += positive;
      }
      if (r.baseline_drawn) {
        ++rep.baseline_reviews;
        rep.baseline_hits += positive;
      }
      if (rep.events >= config.retrain_every) {
        (positive ? rep.positive_scores : rep.negative_scores).push_back(r.score);
      }

      FeedbackEvent e;
      e.mode = PredictionMode::existence;
      if (positive) {
        // The reviewer confirms the held-out triplet as it was planted.
        const Link l = hit->second;
        e = {l.subject, l.object, l.relation, true, l.timestamp, PredictionMode::existence};
        oracle.erase(hit);
        --remaining[u.value];
        --remaining[v.value];
        accepted.insert({l.subject, l.object, l.relation});
        rep.accepted_links.push_back(l);
      } else {
        e = {u, v, std::nullopt, false, ++clock, PredictionMode::existence};
      }
      apply_feedback(g, e);
      ++rep.events;

      if (config.scoring == Scoring::learned && rep.events % config.retrain_every == 0) {
        try {
          const auto [training, note] =
              policy_training_set(g, PredictionMode::existence, std::nullopt, config.training_size,
                                  mix_seed(config.seed, 7000 + rep.events), accepted);
          GPConfig gp = config.gp;
          gp.seed = mix_seed(config.gp.seed ^ config.seed, rep.events);
          const auto run = run_gp(ensemble, training, g, gp);
          weights = run.best_weights;
          rep.trainings.push_back({rep.events, {weights.values().begin(), weights.values().end()}, run.best_fitness});
        } catch (const Error& err) {
          if (err.code() != ErrorCode::insufficient_data) throw;
        }
      }
    }
  }

  rep.final_weights.assign(weights.values().begin(), weights.values().end());
  rep.tp_genetic = fraction(rep.genetic_hits, rep.genetic_reviews);
  rep.fp_genetic = rep.genetic_reviews == 0 ? 0.0 : 1.0 - rep.tp_genetic;
  rep.tp_baseline = fraction(rep.baseline_hits, rep.baseline_reviews);
  rep.fp_baseline = rep.baseline_reviews == 0 ? 0.0 : 1.0 - rep.tp_baseline;
  if (rep.tp_baseline > 0.0) {
    rep.uplift = rep.tp_genetic / rep.tp_baseline;
  } else {
    rep.uplift = rep.tp_genetic > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  rep.ks = ks_statistic(rep.positive_scores, rep.negative_scores);
  return rep;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) return 0.0;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// -- serialization -----------------------------------------------------------------

std::string report_to_json(const ExperimentReport& r) {
  json trainings = json::array();
  for (const auto& t : r.trainings) {
    trainings.push_back({{"after_events", t.after_events}, {"fitness", t.fitness}, {"weights", t.weights}});
  }
  json acc = json::array();
  for (const auto& l : r.accepted_links) {
    acc.push_back({l.subject.value, l.object.value, l.relation.value, l.timestamp});
  }
  json j = {{"seed", r.seed},
            {"feedback_budget", r.feedback_budget},
            {"events", r.events},
            {"genetic_reviews", r.genetic_reviews},
            {"genetic_hits", r.genetic_hits},
            {"baseline_reviews", r.baseline_reviews},
            {"baseline_hits", r.baseline_hits},
            {"tp_genetic", r.tp_genetic},
            {"fp_genetic", r.fp_genetic},
            {"tp_baseline", r.tp_baseline},
            {"fp_baseline", r.fp_baseline},
            {"uplift", std::isinf(r.uplift) ? json("inf") : json(r.uplift)},
            {"ks", r.ks},
            {"metric_names", r.metric_names},
            {"final_weights", r.final_weights},
            {"trainings", trainings},
            {"positive_scores", r.positive_scores},
            {"negative_scores", r.negative_scores},
            {"accepted_links", acc}};
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ExperimentReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.feedback_budget = j.at("feedback_budget").get<std::size_t>();
    r.events = j.at("events").get<std::size_t>();
    r.genetic_reviews = j.at("genetic_reviews").get<std::size_t>();
    r.genetic_hits = j.at("genetic_hits").get<std::size_t>();
    r.baseline_reviews = j.at("baseline_reviews").get<std::size_t>();
    r.baseline_hits = j.at("baseline_hits").get<std::size_t>();
    r.tp_genetic = j.at("tp_genetic").get<double>();
    r.fp_genetic = j.at("fp_genetic").get<double>();
    r.tp_baseline = j.at("tp_baseline").get<double>();
    r.fp_baseline = j.at("fp_baseline").get<double>();
    const auto& up = j.at("uplift");
    r.uplift = up.is_string() ? std::numeric_limits<double>::infinity() : up.get<double>();
    r.ks = j.at("ks").get<double>();
    r.metric_names = j.at("metric_names").get<std::vector<std::string>>();
    r.final_weights = j.at("final_weights").get<std::vector<double>>();
    for (const auto& t : j.at("trainings")) {
      r.trainings.push_back({t.at("after_events").get<std::size_t>(), t.at("weights").get<std::vector<double>>(),
                             t.at("fitness").get<double>()});
    }
    r.positive_scores = j.at("positive_scores").get<std::vector<double>>();
    r.negative_scores = j.at("negative_scores").get<std::vector<double>>();
    for (const auto& l : j.at("accepted_links")) {
      r.accepted_links.push_back({NodeIx{l.at(0).get<std::uint32_t>()}, NodeIx{l.at(1).get<std::uint32_t>()},
                                  RelationIx{l.at(2).get<std::uint32_t>()}, l.at(3).get<Timestamp>()});
    }
    if (r.final_weights.size() != r.metric_names.size()) {
      throw Error(ErrorCode::parse_error, "final_weights and metric_names differ in length");
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("run report: ") + e.what());
  }
}

void write_report(const std::vector<ExperimentReport>& runs, const std::filesystem::path& out_dir) {
  if (runs.empty()) throw Error(ErrorCode::invalid_argument, "no runs to report");
  const auto& names = runs.front().metric_names;
  for (const auto& r : runs) {
    if (r.metric_names != names) throw Error(ErrorCode::invalid_argument, "runs use different metric ensembles");
  }
  std::filesystem::create_directories(out_dir);

  std::string tp = "seed\tmethod\ttp\tfp\treviews\thits\n";
  for (const auto& r : runs) {
    tp += std::to_string(r.seed) + "\tgenetic\t" + fmt(r.tp_genetic) + "\t" + fmt(r.fp_genetic) + "\t" +
          std::to_string(r.genetic_reviews) + "\t" + std::to_string(r.genetic_hits) + "\n";
    tp += std::to_string(r.seed) + "\tbaseline\t" + fmt(r.tp_baseline) + "\t" + fmt(r.fp_baseline) + "\t" +
          std::to_string(r.baseline_reviews) + "\t" + std::to_string(r.baseline_hits) + "\n";
  }
  write_file(out_dir / "tp_fp.tsv", tp);

  std::string wt = "run";
  for (const auto& n : names) wt += "\t" + n;
  wt += "\n";
  std::vector<double> avg(names.size(), 0.0);
  for (const auto& r : runs) {
    wt += std::to_string(r.seed);
    for (std::size_t i = 0; i < names.size(); ++i) {
      wt += "\t" + fmt(r.final_weights[i]);
      avg[i] += r.final_weights[i] / static_cast<double>(runs.size());
    }
    wt += "\n";
  }
  wt += "mean";
  for (double w : avg) wt += "\t" + fmt(w);
  wt += "\n";
  write_file(out_dir / "weights.tsv", wt);

  std::string hist = "run\tafter_events\tfitness";
  for (const auto& n : names) hist += "\t" + n;
  hist += "\n";
  for (const auto& r : runs) {
    for (const auto& t : r.trainings) {
      hist += std::to_string(r.seed) + "\t" + std::to_string(t.after_events) + "\t" + fmt(t.fitness);
      for (double w : t.weights) hist += "\t" + fmt(w);
      hist += "\n";
    }
  }
  write_file(out_dir / "weight_history.tsv", hist);

  auto cdf = [&](bool positive) {
    std::vector<double> xs;
    for (const auto& r : runs) {
      const auto& s = positive ? r.positive_scores : r.negative_scores;
      xs.insert(xs.end(), s.begin(), s.end());
    }
    std::sort(xs.begin(), xs.end());
    std::string out = "score\tcdf\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      // One row per distinct score, at its last occurrence.
      if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;
      out += fmt(xs[i]) + "\t" + fmt(static_cast<double>(i + 1) / static_cast<double>(xs.size())) + "\n";
    }
    return out;
  };
  write_file(out_dir / "cdf_positive.tsv", cdf(true));
  write_file(out_dir / "cdf_negative.tsv", cdf(false));

  std::string sum = "# reference, human study of 11 reviewers: genetic tp 0.2788, baseline tp 0.1220, "
                    "mean uplift 2.1325 at 2627 feedback events\n";
  sum += "seed\tevents\ttp_genetic\ttp_baseline\tuplift\tks\tpositive_mean\tnegative_mean\n";
  std::vector<double> col[6];
  for (const auto& r : runs) {
    const double vals[] = {r.tp_genetic, r.tp_baseline, r.uplift, r.ks, mean(r.positive_scores),
                           mean(r.negative_scores)};
    sum += std::to_string(r.seed) + "\t" + std::to_string(r.events);
    for (int i = 0; i < 6; ++i) {
      sum += "\t" + fmt(vals[i]);
      col[i].push_back(vals[i]);
    }
    sum += "\n";
  }
  std::size_t events = 0;
  for (const auto& r : runs) events += r.events;
  sum += "mean\t" + fmt(static_cast<double>(events) / static_cast<double>(runs.size()));
  for (const auto& c : col) sum += "\t" + fmt(mean(c));
  sum += "\n";
  write_file(out_dir / "summary.tsv", sum);
}

// -- hidden link documents ---------------------------------------------------------

namespace {

// Ontology and nodes of `g` with no links.
BundleFiles skeleton(const KnowledgeGraph& g) {
  GraphBundle b;
  b.graph = g;
  auto files = render_bundle(b);
  files.erase(bundle_files::kManifest);
  files.erase(bundle_files::kLinks);
  files.erase(bundle_files::kNonLinks);
  files.erase(bundle_files::kFeedback);
  files.erase(bundle_files::kWeightsExistence);
  files.erase(bundle_files::kWeightsSemantic);
  return files;
}

}  // namespace

std::string render_hidden(const KnowledgeGraph& g, const std::vector<Link>& hidden) {
  GraphBundle b;
  b.graph = parse_bundle(skeleton(g)).graph;
  for (const auto& l : hidden) {
    b.graph.add_link(b.graph.node_by_id(g.node(l.subject).id), b.graph.node_by_id(g.node(l.object).id),
                     b.graph.relation_by_id(g.relation(l.relation).id), l.timestamp);
  }
  return render_bundle(b).at(bundle_files::kLinks);
}

std::vector<Link> parse_hidden(const KnowledgeGraph& g, const std::string& text) {
  auto files = skeleton(g);
  files[bundle_files::kLinks] = text;
  const auto h = parse_bundle(files).graph;
  std::vector<Link> out;
  for (const auto& l : h.links()) {
    out.push_back({g.node_by_id(h.node(l.subject).id), g.node_by_id(h.node(l.object).id),
                   g.relation_by_id(h.relation(l.relation).id), l.timestamp});
  }
  return out;
}

}  // namespace kglf
