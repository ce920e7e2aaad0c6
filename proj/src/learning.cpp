// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/learning.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace kglf {

namespace {

// Algorithm R: uniform sample of k items from a stream of unknown length.
template <class T>
class Reservoir {
 public:
  Reservoir(std::size_t k, Rng& rng) : k_(k), rng_(rng) { items_.reserve(k); }

  void offer(const T& item) {
    ++seen_;
    if (items_.size() < k_) {
      items_.push_back(item);
      return;
    }
    std::uniform_int_distribution<std::size_t> pick(0, seen_ - 1);
    const std::size_t slot = pick(rng_);
    if (slot < k_) items_[slot] = item;
  }

  std::vector<T>& items() { return items_; }

 private:
  std::size_t k_;
  Rng& rng_;
  std::size_t seen_ = 0;
  std::vector<T> items_;
};

std::pair<NodeIx, NodeIx> unordered(NodeIx a, NodeIx b) { return {std::min(a, b), std::max(a, b)}; }

bool pair_compatible(const KnowledgeGraph& g, NodeIx a, NodeIx b) {
  for (std::uint32_t r = 0; r < g.relation_count(); ++r) {
    if (g.schema_allows(a, b, RelationIx{r}) || g.schema_allows(b, a, RelationIx{r})) return true;
  }
  return false;
}

std::vector<TrainingInstance> positives(const KnowledgeGraph& g, PredictionMode mode,
                                        std::size_t count, Rng& rng,
                                        const std::set<LinkKey>& accepted) {
  std::vector<TrainingInstance> pool;
  if (mode == PredictionMode::semantic) {
    for (const auto& l : g.links()) {
      const bool user = accepted.contains(LinkKey{l.subject, l.object, l.relation});
      pool.push_back({l.subject, l.object, l.relation, 1,
                      user ? Provenance::user_accept : Provenance::observed_link});
    }
  } else {
    std::map<std::pair<NodeIx, NodeIx>, std::size_t> seen;
    for (const auto& l : g.links()) {
      if (l.subject == l.object) continue;
      const bool user = accepted.contains(LinkKey{l.subject, l.object, l.relation});
      auto [it, fresh] = seen.emplace(unordered(l.subject, l.object), pool.size());
      if (fresh) {
        pool.push_back({l.subject, l.object, std::nullopt, 1,
                        user ? Provenance::user_accept : Provenance::observed_link});
      } else if (user) {
        pool[it->second].provenance = Provenance::user_accept;
      }
    }
  }
  if (pool.size() < count) {
    throw Error(ErrorCode::insufficient_data,
                "training set needs " + std::to_string(count) + " positives, graph has " +
                    std::to_string(pool.size()));
  }
  return sample_without_replacement(std::move(pool), count, rng);
}

std::vector<TrainingInstance> gold_pool(const KnowledgeGraph& g, PredictionMode mode) {
  std::vector<TrainingInstance> pool;
  std::set<std::pair<NodeIx, NodeIx>> seen;
  for (const auto& nl : g.non_links()) {
    if (mode == PredictionMode::semantic) {
      if (!nl.relation) continue;
      pool.push_back({nl.subject, nl.object, nl.relation, 0, Provenance::user_reject});
    } else {
      if (nl.relation) continue;
      if (!seen.insert(unordered(nl.subject, nl.object)).second) continue;
      pool.push_back({nl.subject, nl.object, std::nullopt, 0, Provenance::user_reject});
    }
  }
  return pool;
}

// Calls fn(instance) for every unobserved, schema-compatible candidate.
template <class Fn>
void for_each_silver(const KnowledgeGraph& g, PredictionMode mode, Fn&& fn) {
  const auto n = static_cast<std::uint32_t>(g.node_count());
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const NodeIx u{a};
      const NodeIx v{b};
      if (mode == PredictionMode::semantic) {
        for (std::uint32_t r = 0; r < g.relation_count(); ++r) {
          const RelationIx j{r};
          if (g.schema_allows(u, v, j) && !g.has_link(u, v, j)) {
            fn(TrainingInstance{u, v, j, 0, Provenance::silver_negative});
          }
        }
      } else if (a < b && !g.connected(u, v) && pair_compatible(g, u, v)) {
        const bool forward = !g.compatible_relations(u, v).empty();
        fn(TrainingInstance{forward ? u : v, forward ? v : u, std::nullopt, 0, Provenance::silver_negative});
      }
    }
  }
}

std::vector<TrainingInstance> silver_negatives(const KnowledgeGraph& g, PredictionMode mode,
                                               std::size_t count, Rng& rng) {
  Reservoir<TrainingInstance> reservoir(count, rng);
  for_each_silver(g, mode, [&](TrainingInstance inst) { reservoir.offer(std::move(inst)); });
  auto& items = reservoir.items();
  if (items.size() < count) {
    throw Error(ErrorCode::insufficient_data,
                "training set needs " + std::to_string(count) + " unobserved negatives, graph has " +
                    std::to_string(items.size()));
  }
  return std::move(items);
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

std::string_view to_string(Standard standard) {
  return standard == Standard::gold ? "gold" : "silver";
}

Standard parse_standard(std::string_view text) {
  if (text == "gold") return Standard::gold;
  if (text == "silver") return Standard::silver;
  throw Error(ErrorCode::invalid_argument, "unknown training standard '" + std::string(text) + "'");
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::observed_link: return "observed_link";
    case Provenance::user_accept: return "user_accept";
    case Provenance::user_reject: return "user_reject";
    case Provenance::silver_negative: return "silver_negative";
  }
  return "unknown";
}

std::size_t gold_negative_pool(const KnowledgeGraph& g, PredictionMode mode) {
  return gold_pool(g, mode).size();
}

std::size_t silver_negative_pool(const KnowledgeGraph& g, PredictionMode mode) {
  std::size_t n = 0;
  for_each_silver(g, mode, [&](const TrainingInstance&) { ++n; });
  return n;
}

TrainingSet build_training_set(const KnowledgeGraph& g, PredictionMode mode, Standard standard,
                               std::size_t size, std::uint64_t seed,
                               const std::set<LinkKey>& accepted) {
  if (size % 2 != 0) {
    throw Error(ErrorCode::invalid_argument, "training set size must be even");
  }
  TrainingSet set{mode, standard, {}};
  if (size == 0) return set;
  const std::size_t half = size / 2;
  Rng rng(seed);

  set.instances = positives(g, mode, half, rng, accepted);
  std::vector<TrainingInstance> negatives;
  if (standard == Standard::gold) {
    auto pool = gold_pool(g, mode);
    if (pool.size() < half) {
      throw Error(ErrorCode::insufficient_data,
                  "gold standard needs " + std::to_string(half) + " recorded rejections, graph has " +
                      std::to_string(pool.size()));
    }
    negatives = sample_without_replacement(std::move(pool), half, rng);
  } else {
    negatives = silver_negatives(g, mode, half, rng);
  }
  set.instances.insert(set.instances.end(), negatives.begin(), negatives.end());
  return set;
}

FeatureMatrix compute_features(const KnowledgeGraph& g, const MetricEnsemble& ensemble,
                               const TrainingSet& set) {
  if (set.mode != ensemble.mode) {
    throw Error(ErrorCode::invalid_argument, "training set mode does not match the ensemble");
  }
  FeatureMatrix fm;
  fm.rows = set.size();
  fm.cols = ensemble.size();
  fm.values.reserve(fm.rows * fm.cols);
  fm.labels.reserve(fm.rows);

  KnowledgeGraph work = g;
  for (const auto& inst : set.instances) {
    std::vector<Link> hidden;
    if (inst.label == 1) {
      if (inst.relation) {
        for (const auto& l : work.pair_links(inst.subject, inst.object)) {
          if (l.relation != *inst.relation) continue;
          const bool subject_low = inst.subject <= inst.object;
          if (l.forward == subject_low || inst.subject == inst.object) {
            hidden.push_back({inst.subject, inst.object, l.relation, l.timestamp});
          }
        }
      } else {
        const NodeIx lo = std::min(inst.subject, inst.object);
        const NodeIx hi = std::max(inst.subject, inst.object);
        for (const auto& l : work.pair_links(inst.subject, inst.object)) {
          hidden.push_back(l.forward ? Link{lo, hi, l.relation, l.timestamp}
                                     : Link{hi, lo, l.relation, l.timestamp});
        }
      }
      for (const auto& l : hidden) work.remove_link(l.subject, l.object, l.relation);
    }
    const auto scores = score_vector(ensemble, work, inst.subject, inst.object, inst.relation);
    fm.values.insert(fm.values.end(), scores.begin(), scores.end());
    fm.labels.push_back(static_cast<double>(inst.label));
    for (const auto& l : hidden) work.add_link(l.subject, l.object, l.relation, l.timestamp);
  }
  return fm;
}

double mse(const WeightVector& weights, const FeatureMatrix& features) {
  if (weights.size() != features.cols) {
    throw Error(ErrorCode::invalid_argument, "weight vector length does not match the features");
  }
  if (features.rows == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < features.rows; ++i) {
    const auto row = features.row(i);
    double s = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) s += weights[k] * row[k];
    const double err = clamp01(s) - features.labels[i];
    total += err * err;
  }
  return total / static_cast<double>(features.rows);
}

double fitness(const WeightVector& weights, const TrainingSet& set, const MetricEnsemble& ensemble,
               const KnowledgeGraph& g) {
  return mse(weights, compute_features(g, ensemble, set));
}

// -- genetic operators -------------------------------------------------------

std::pair<WeightVector, WeightVector> crossover_at(const WeightVector& a, const WeightVector& b,
                                                   std::size_t split) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::invalid_argument, "crossover parents differ in length");
  }
  if (split > a.size()) throw Error(ErrorCode::invalid_argument, "crossover split out of range");
  std::vector<double> ca(a.values().begin(), a.values().end());
  std::vector<double> cb(b.values().begin(), b.values().end());
  for (std::size_t i = split; i < ca.size(); ++i) std::swap(ca[i], cb[i]);
  return {WeightVector(std::move(ca)), WeightVector(std::move(cb))};
}

std::pair<WeightVector, WeightVector> crossover(const WeightVector& a, const WeightVector& b,
                                                Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, a.size());
  return crossover_at(a, b, pick(rng));
}

std::pair<WeightVector, WeightVector> crossover(const WeightVector& a, const WeightVector& b,
                                                std::uint64_t seed) {
  Rng rng(seed);
  return crossover(a, b, rng);
}

WeightVector mutate(const WeightVector& w, double threshold, Rng& rng) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "mutation threshold must be in [0, 1]");
  }
  if (w.empty()) return w;
  std::uniform_int_distribution<std::size_t> position(0, w.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t pos = position(rng);
  if (!(unit(rng) < threshold)) return w;
  std::vector<double> raw(w.values().begin(), w.values().end());
  raw[pos] = unit(rng);
  return WeightVector(std::move(raw));
}

WeightVector mutate(const WeightVector& w, double threshold, std::uint64_t seed) {
  Rng rng(seed);
  return mutate(w, threshold, rng);
}

std::size_t select_worst(std::span<const double> fitnesses) {
  if (fitnesses.empty()) throw Error(ErrorCode::invalid_argument, "empty population");
  std::size_t worst = 0;
  for (std::size_t i = 1; i < fitnesses.size(); ++i) {
    if (fitnesses[i] > fitnesses[worst]) worst = i;
  }
  return worst;
}

void GPConfig::validate() const {
  if (population_size < 5 || population_size > 11) {
    throw Error(ErrorCode::invalid_argument, "population size must be within 5..11");
  }
  if (max_iterations < 1) throw Error(ErrorCode::invalid_argument, "max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be >= 0");
  if (!(mutation_threshold >= 0.0 && mutation_threshold <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "mutation threshold must be in [0, 1]");
  }
}

namespace {

WeightVector random_genotype(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> raw(n);
  for (double& x : raw) x = unit(rng);
  return WeightVector(std::move(raw));
}

bool collapsed(std::span<const WeightVector> population) {
  for (std::size_t a = 0; a < population.size(); ++a) {
    for (std::size_t b = a + 1; b < population.size(); ++b) {
      double l1 = 0.0;
      for (std::size_t k = 0; k < population[a].size(); ++k) {
        l1 += std::abs(population[a][k] - population[b][k]);
      }
      if (l1 >= 1e-6) return false;
    }
  }
  return true;
}

}  // namespace

GPRunReport run_gp(const FeatureMatrix& features, const GPConfig& config,
                   const GenerationObserver& observer) {
  config.validate();
  if (features.rows == 0) throw Error(ErrorCode::insufficient_data, "empty training set");
  if (features.cols == 0) throw Error(ErrorCode::invalid_argument, "empty metric ensemble");

  Rng rng(config.seed);
  const std::size_t n = config.population_size;
  std::vector<WeightVector> population;
  population.reserve(n);
  for (std::size_t i = 0; i < n; ++i) population.push_back(random_genotype(features.cols, rng));

  GPRunReport report;
  std::optional<WeightVector> best;
  std::vector<double> fit(n);
  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) fit[i] = mse(population[i], features);
    if (observer) observer(iter, population, fit);

    const auto gen_best = static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
    if (!best || fit[gen_best] < report.best_fitness) {
      best = population[gen_best];
      report.best_fitness = fit[gen_best];
    }
    report.fitness_trace.push_back(report.best_fitness);
    report.iterations_used = iter;
    if (report.best_fitness < config.tolerance) break;

    // The least fit individual does not reproduce.
    const std::size_t worst = select_worst(fit);
    std::vector<const WeightVector*> pool;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != worst || n == 1) pool.push_back(&population[i]);
    }

    std::vector<WeightVector> next{*best};
    std::uniform_int_distribution<std::size_t> parent(0, pool.size() - 1);
    while (next.size() < n) {
      const std::size_t a = parent(rng);
      std::size_t b = parent(rng);
      if (pool.size() > 1) {
        while (b == a) b = parent(rng);
      }
      auto [c1, c2] = crossover(*pool[a], *pool[b], rng);
      next.push_back(mutate(c1, config.mutation_threshold, rng));
      if (next.size() < n) next.push_back(mutate(c2, config.mutation_threshold, rng));
    }
    if (collapsed(next)) {
      for (std::size_t i = 1; i < n; ++i) next[i] = random_genotype(features.cols, rng);
      ++report.restarts;
    }
    population = std::move(next);
  }
  report.best_weights = *best;
  return report;
}

GPRunReport run_gp(const MetricEnsemble& ensemble, const TrainingSet& set, const KnowledgeGraph& g,
                   const GPConfig& config) {
  if (set.empty()) throw Error(ErrorCode::insufficient_data, "empty training set");
  return run_gp(compute_features(g, ensemble, set), config);
}

}  // namespace kglf
