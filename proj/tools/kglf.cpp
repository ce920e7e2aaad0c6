// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors
//
// kglf generate|simulate|report|serve|import|export

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kglf/harness.hpp"
#include "kglf/service.hpp"

namespace fs = std::filesystem;
using namespace kglf;

namespace {

constexpr int kValidationFailure = 2;
constexpr int kIoFailure = 1;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + p.string());
}

struct SpecFlags {
  std::size_t persons = 80;
  std::size_t stops = 25;
  std::size_t cities = 15;
  std::size_t links = 480;
  std::vector<double> mix = {0.5, 0.3, 0.2};
  double holdout = 0.2;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--persons", persons, "Person nodes")->capture_default_str();
    cmd->add_option("--stops", stops, "Stop nodes")->capture_default_str();
    cmd->add_option("--cities", cities, "City nodes")->capture_default_str();
    cmd->add_option("--links", links, "links in the full graph")->capture_default_str();
    cmd->add_option("--mix", mix, "triadic_closure,type_affinity,temporal_recency")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    cmd->add_option("--holdout", holdout, "fraction of links held out")->capture_default_str();
  }

  SyntheticSpec spec(std::uint64_t seed) const {
    SyntheticSpec s;
    s.concepts = {{"Person", persons}, {"Stop", stops}, {"City", cities}};
    s.links = links;
    s.triadic_closure = mix.at(0);
    s.type_affinity = mix.at(1);
    s.temporal_recency = mix.at(2);
    s.holdout = holdout;
    s.seed = seed;
    return s;
  }
};

void print_summary(const KnowledgeGraph& g, std::size_t feedback) {
  std::cout << "nodes " << g.node_count() << ", links " << g.link_count() << ", non-links "
            << g.non_links().size() << ", feedback events " << feedback << "\n";
  for (std::uint32_t j = 0; j < g.relation_count(); ++j) {
    std::cout << "  " << g.relation(RelationIx{j}).id << ": " << g.link_count(RelationIx{j}) << "\n";
  }
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human-supervised link prediction for knowledge graphs"};
  app.require_subcommand(1);
  // Settings live in per-subcommand sections, e.g. [serve]; flags override them.
  app.set_config("--config", "", "TOML config file");
  app.fallthrough();

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic bundle plus its held-out links");
  SpecFlags gen_spec;
  fs::path gen_out;
  std::uint64_t gen_seed = 0;
  gen_spec.add_to(gen);
  gen->add_option("--out", gen_out, "bundle directory to create")->required();
  gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run the simulated reviewer and write run reports");
  SpecFlags sim_spec;
  sim_spec.add_to(sim);
  std::optional<fs::path> sim_bundle;
  fs::path sim_out;
  std::uint64_t sim_seed = 0;
  std::size_t sim_runs = 1;
  SimulationConfig sim_config;
  std::string sim_scoring = "learned";
  sim->add_option("--bundle", sim_bundle, "bundle with hidden.jsonl; default: generate one per seed");
  sim->add_option("--out", sim_out, "directory for run-<seed>.json")->required();
  sim->add_option("--seed", sim_seed, "first seed")->capture_default_str();
  sim->add_option("--runs", sim_runs, "number of consecutive seeds")->capture_default_str();
  sim->add_option("--budget", sim_config.budget, "feedback events per run")->capture_default_str();
  sim->add_option("-k", sim_config.k, "recommendations per request")->capture_default_str();
  sim->add_option("--candidate-size", sim_config.candidate_size, "candidate set size N")->capture_default_str();
  sim->add_option("--retrain-every", sim_config.retrain_every, "feedback events between trainings")
      ->capture_default_str();
  sim->add_option("--scoring", sim_scoring, "learned, zero, or onehot:<metric>")->capture_default_str();

  // report
  auto* rep = app.add_subcommand("report", "Aggregate run reports into plot-ready tables");
  fs::path rep_runs, rep_out;
  rep->add_option("--runs", rep_runs, "directory holding run-*.json")->required();
  rep->add_option("--out", rep_out, "output directory")->required();

  // serve
  auto* srv = app.add_subcommand("serve", "Serve the HTTP API over a bundle");
  fs::path srv_bundle;
  std::string srv_host = "127.0.0.1";
  int srv_port = 8080;
  EngineConfig srv_config;
  // Checked after parsing so the config file can supply it.
  srv->add_option("--bundle", srv_bundle, "bundle directory (created if missing, required)");
  srv->add_option("--host", srv_host, "listen address")->capture_default_str();
  srv->add_option("--port", srv_port, "listen port, 0 for any")->capture_default_str();
  srv->add_option("--retrain-every", srv_config.retrain_every, "feedback events between trainings, 0 = manual")
      ->capture_default_str();
  srv->add_option("--candidate-size", srv_config.candidate_size, "candidate set size N")->capture_default_str();
  srv->add_option("--training-size", srv_config.training_size, "upper bound on training instances")
      ->capture_default_str();
  srv->add_option("--seed", srv_config.seed, "seed for sampling and training")->capture_default_str();
  srv->add_option("--salt", srv_config.anonymize_salt, "salt for anonymized exports (default: random)");

  // import
  auto* imp = app.add_subcommand("import", "Validate a bundle and print its summary");
  fs::path imp_bundle;
  imp->add_option("bundle", imp_bundle, "bundle directory")->required();

  // export
  auto* exp = app.add_subcommand("export", "Re-write a bundle, optionally anonymized");
  fs::path exp_bundle, exp_out;
  bool exp_anonymize = false;
  std::string exp_salt;
  std::vector<std::string> exp_concepts = {"Person"};
  exp->add_option("bundle", exp_bundle, "source bundle directory")->required();
  exp->add_option("--out", exp_out, "target directory")->required();
  exp->add_flag("--anonymize", exp_anonymize, "pseudonymize protected nodes");
  exp->add_option("--salt", exp_salt, "pseudonym salt (required with --anonymize)");
  exp->add_option("--concept", exp_concepts, "protected concepts, descendants included")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationFailure;
  }
  if (*srv && srv_bundle.empty()) {
    std::cerr << "--bundle is required (flag or config file)\n";
    return kValidationFailure;
  }

  try {
    if (*gen) {
      const auto sg = generate(gen_spec.spec(gen_seed));
      export_bundle(GraphBundle{sg.visible, std::nullopt, std::nullopt, {}}, gen_out);
      write_text(gen_out / kHiddenFile, render_hidden(sg.visible, sg.hidden));
      std::cout << "wrote " << gen_out.string() << ": " << sg.visible.node_count() << " nodes, "
                << sg.visible.link_count() << " visible links, " << sg.hidden.size() << " held out\n";
    } else if (*sim) {
      if (sim_scoring.rfind("onehot:", 0) == 0) {
        const auto e = default_ensemble(PredictionMode::existence);
        const auto idx = e.index_of(sim_scoring.substr(7));
        if (!idx) throw Error(ErrorCode::invalid_argument, "unknown metric '" + sim_scoring.substr(7) + "'");
        sim_config.scoring = Scoring::fixed;
        sim_config.fixed_weights = WeightVector::one_hot(e.size(), *idx);
      } else if (sim_scoring == "zero") {
        sim_config.scoring = Scoring::zero;
      } else if (sim_scoring != "learned") {
        throw Error(ErrorCode::invalid_argument, "unknown scoring '" + sim_scoring + "'");
      }
      std::optional<SyntheticGraph> fixed_graph;
      if (sim_bundle) {
        auto b = import_bundle(*sim_bundle);
        auto hidden = parse_hidden(b.graph, slurp(*sim_bundle / kHiddenFile));
        fixed_graph = SyntheticGraph{std::move(b.graph), std::move(hidden), 0};
      }
      fs::create_directories(sim_out);
      for (std::uint64_t seed = sim_seed; seed < sim_seed + sim_runs; ++seed) {
        const auto sg = fixed_graph ? *fixed_graph : generate(sim_spec.spec(seed));
        auto config = sim_config;
        config.seed = seed;
        const auto r = simulate(sg.visible, sg.hidden, config);
        write_text(sim_out / ("run-" + std::to_string(seed) + ".json"), report_to_json(r));
        std::cout << "seed " << seed << ": tp genetic " << fixed(r.tp_genetic) << ", tp baseline "
                  << fixed(r.tp_baseline) << ", uplift " << fixed(r.uplift, 3) << ", ks " << fixed(r.ks, 3)
                  << ", events " << r.events << "\n";
      }
    } else if (*rep) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(rep_runs)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("run-", 0) == 0 && entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<ExperimentReport> runs;
      for (const auto& f : files) runs.push_back(report_from_json(slurp(f)));
      std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
      write_report(runs, rep_out);
      std::size_t passing = 0;
      for (const auto& r : runs) passing += r.uplift >= 1.5;
      std::cout << runs.size() << " runs, uplift >= 1.5 on " << passing << "; tables in " << rep_out.string()
                << "\n";
    } else if (*srv) {
      // Block the signals before any thread exists so only sigwait sees them.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

      GraphBundle bundle;
      if (fs::exists(srv_bundle)) bundle = import_bundle(srv_bundle);
      srv_config.bundle_dir = srv_bundle;
      Engine engine(std::move(bundle), srv_config);
      Service service(engine);
      const int port = service.start(srv_host, srv_port);
      std::cout << "listening on http://" << srv_host << ":" << port << std::endl;
      int sig = 0;
      sigwait(&stop_signals, &sig);
      service.stop();
      engine.wait_for_jobs();
    } else if (*imp) {
      const auto b = import_bundle(imp_bundle);
      print_summary(b.graph, b.feedback.size());
    } else if (*exp) {
      const auto b = import_bundle(exp_bundle);
      std::optional<AnonymizationPolicy> policy;
      if (exp_anonymize) {
        if (exp_salt.empty()) throw Error(ErrorCode::invalid_argument, "--anonymize needs --salt");
        policy = AnonymizationPolicy{exp_salt, {exp_concepts.begin(), exp_concepts.end()}};
      }
      export_bundle(b, exp_out, policy);
      std::cout << "wrote " << exp_out.string() << (policy ? " (anonymized)" : "") << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "kglf: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::io_error ? kIoFailure : kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "kglf: " << e.what() << "\n";
    return kIoFailure;
  }
  return 0;
}
