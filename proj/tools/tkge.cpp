// tkge: temporal knowledge-graph embedding pipeline.
//
// Subcommands: ingest, sample-snowball, sample-temporal, split, stats,
// train, eval, export-importance, grid. All tabular outputs are TSV with a
// one-line '#' provenance header; given identical inputs and seed every
// subcommand writes byte-identical outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tkge/eval.hpp"
#include "tkge/graph.hpp"
#include "tkge/ingest.hpp"
#include "tkge/io.hpp"
#include "tkge/model.hpp"
#include "tkge/sampling.hpp"
#include "tkge/splits.hpp"
#include "tkge/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tkge;

namespace {

std::string provenance(const std::string& what, std::uint64_t seed) {
  return "tkge " + what + " seed=" + std::to_string(seed);
}

void write_resolved_config(const fs::path& next_to, const json& resolved) {
  fs::path path = next_to;
  path += ".resolved.json";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << resolved.dump(2) << "\n";
}

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("config file is not a JSON object: " + path);
  }
  return j;
}

// Flag value if the user passed it, else the config-file value, else the
// built-in default already stored in `value`.
template <typename T>
void merge_option(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
  if (opt->count() > 0) return;
  if (cfg.contains(key)) value = cfg[key].get<T>();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct SplitPaths {
  fs::path dir;
  io::LoadedSplit loaded;
};

SplitPaths load_split_dir(const std::string& dir) {
  SplitPaths sp;
  sp.dir = dir;
  sp.loaded = io::load_split(sp.dir);
  return sp;
}

std::unordered_set<RelationId> relation_filter(const TemporalKG& kg, const std::string& csv) {
  std::unordered_set<RelationId> out;
  for (const auto& code : split_commas(csv)) {
    auto id = kg.relations().id_of(code);
    if (!id) throw std::runtime_error("unknown relation code in filter: " + code);
    out.insert(*id);
  }
  return out;
}

void write_metrics_tsv(const fs::path& path, const eval::RankingResult& m,
                       const std::string& header) {
  auto out = io::open_out(path);
  out << "# " << header << "\n";
  out << "n\thits1\thits1_se\thits1_ci95\thits3\thits3_se\thits3_ci95\t"
         "hits10\thits10_se\thits10_ci95\tmr\tmr_se\tmr_ci95\tmrr\tmrr_se\tmrr_ci95\n";
  auto put = [&out](double v, double se) {
    out << v << '\t' << se << '\t' << 1.96 * se << '\t';
  };
  out << m.num_queries << '\t';
  put(m.hits1, m.se_hits1);
  put(m.hits3, m.se_hits3);
  put(m.hits10, m.se_hits10);
  put(m.mean_rank, m.se_mean_rank);
  out << m.mrr << '\t' << m.se_mrr << '\t' << 1.96 * m.se_mrr << "\n";
}

// ---------------------------------------------------------------------------

int cmd_ingest(const std::string& rules_path, const std::vector<std::string>& event_paths,
               const std::string& out_dir, const std::string& relations, std::uint64_t seed) {
  auto table = ingest::build_rule_table(rules_path);

  std::unordered_set<std::string> subset;
  const std::unordered_set<std::string>* subset_ptr = nullptr;
  if (relations == "default") {
    subset = table.default_subset();
    subset_ptr = &subset;
  } else if (relations != "all") {
    for (const auto& code : split_commas(relations)) {
      if (!table.has_code(code)) throw std::runtime_error("unknown relation code: " + code);
      subset.insert(code);
    }
    subset_ptr = &subset;
  }

  std::vector<ingest::RawEvent> events;
  std::size_t skipped = 0;
  for (const auto& path : event_paths) {
    auto parsed = ingest::parse_events_file(path);
    skipped += parsed.skipped;
    for (auto& ev : parsed.events) events.push_back(std::move(ev));
  }
  auto out = ingest::ingest_events(events, table, subset_ptr);
  out.report.skipped_lines = skipped;

  fs::create_directories(out_dir);
  const std::string header =
      provenance("ingest", seed) + " epoch_day=" + std::to_string(out.report.epoch_day);
  io::write_tuples(fs::path(out_dir) / "tuples.tsv", out.tuples, header);
  io::write_entity_types(fs::path(out_dir) / "entities.tsv", out.entity_types, header);
  {
    auto report = io::open_out(fs::path(out_dir) / "report.tsv");
    report << "# " << header << "\n";
    report << "events\t" << out.report.events << "\n";
    report << "skipped_lines\t" << out.report.skipped_lines << "\n";
    report << "unmatched_events\t" << out.report.unmatched_events << "\n";
    report << "tuples\t" << out.report.tuples << "\n";
    for (const auto& [code, count] : out.report.per_relation) {
      report << "relation\t" << code << "\t" << count << "\n";
    }
  }
  std::cout << "ingested " << out.report.events << " events -> " << out.report.tuples
            << " tuples (" << out.report.unmatched_events << " unmatched, " << skipped
            << " skipped lines)\n";
  return 0;
}

int cmd_stats(const std::string& tuples, const std::string& types, const std::string& out_path) {
  auto kg = io::load_kg(tuples, types);
  auto s = stats(kg);
  std::ostringstream row;
  row << "entities\tedges\trelations\ttime_span\tdegree_max\tdegree_median\n"
      << s.num_entities << '\t' << s.num_edges << '\t' << s.num_relations << '\t' << s.time_span
      << '\t' << s.degree_max << '\t' << s.degree_median << "\n";
  if (out_path.empty()) {
    std::cout << row.str();
  } else {
    auto out = io::open_out(out_path);
    out << "# " << provenance("stats", 0) << "\n" << row.str();
  }
  return 0;
}

int cmd_split(const std::string& tuples, const std::string& types, const std::string& mode,
              const std::string& ratios_csv, std::uint64_t seed, const std::string& out_dir) {
  auto kg = io::load_kg(tuples, types);
  auto parts = split_commas(ratios_csv);
  if (parts.size() != 3) throw std::runtime_error("--ratios needs three comma-separated values");
  std::array<double, 3> ratios{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
  DatasetSplit split;
  if (mode == "random") {
    split = split_random(kg, ratios, seed);
  } else if (mode == "temporal") {
    split = split_temporal(kg, ratios);
  } else {
    throw std::runtime_error("--mode must be random or temporal");
  }
  io::save_split(out_dir, kg, split, provenance("split " + mode, seed));
  std::cout << "split sizes: train=" << split.train.size() << " valid=" << split.validation.size()
            << " test=" << split.test.size() << "\n";
  return 0;
}

int cmd_sample_snowball(const std::string& tuples, const std::string& types, std::int64_t n,
                        int s, int k, std::uint64_t seed, const std::string& out_dir) {
  auto kg = io::load_kg(tuples, types);
  sampling::SamplerConfig cfg;
  cfg.target_nodes = n;
  cfg.growth = s;
  cfg.seeds = k;
  cfg.seed = seed;
  auto result = sampling::snowball_sample(kg, cfg);
  io::save_kg(out_dir, result.subgraph, provenance("sample-snowball", seed));
  json prov{{"strategy", "snowball"},
            {"target_nodes", n},
            {"growth", s},
            {"seeds", k},
            {"seed", seed},
            {"selected_nodes", result.nodes.size()},
            {"edges", result.subgraph.num_edges()}};
  std::ofstream(fs::path(out_dir) / "provenance.json") << prov.dump(2) << "\n";
  std::cout << "snowball sample: " << result.nodes.size() << " nodes, "
            << result.subgraph.num_edges() << " edges\n";
  return 0;
}

int cmd_sample_temporal(const std::string& tuples, const std::string& types, double w1, double w2,
                        std::int64_t n, const std::string& out_dir) {
  auto kg = io::load_kg(tuples, types);
  auto result = sampling::temporal_sample(kg, w1, w2, n);
  io::save_kg(out_dir, result.subgraph, provenance("sample-temporal", 0));
  {
    auto scores = io::open_out(fs::path(out_dir) / "scores.tsv");
    scores << "# " << provenance("sample-temporal", 0) << " w1=" << w1 << " w2=" << w2 << "\n";
    scores << "repository\ttuples\ttime_span\tpopularity\n";
    for (const auto& g : result.ranked) {
      scores << g.label << '\t' << g.num_tuples << '\t' << g.time_span << '\t' << g.popularity
             << "\n";
    }
  }
  json prov{{"strategy", "temporal"},
            {"w1", w1},
            {"w2", w2},
            {"target_nodes", n},
            {"selected_nodes", result.nodes.size()},
            {"edges", result.subgraph.num_edges()}};
  std::ofstream(fs::path(out_dir) / "provenance.json") << prov.dump(2) << "\n";
  std::cout << "temporal sample: " << result.nodes.size() << " nodes from "
            << result.ranked.size() << " repositories\n";
  return 0;
}

struct TrainArgs {
  std::string split_dir;
  std::string model = "rt_de_rotate";
  int ds = 64, dt = 64, dr = 32;
  train::TrainConfig cfg;
  bool include_validation = false;
  std::string unknown = "object";
  std::string query_relations;
  std::string out = "model.ckpt";
  std::string metrics_log;
};

int run_train(const TrainArgs& a, const json& resolved) {
  auto sp = load_split_dir(a.split_dir);
  auto kind = parse_model_kind(a.model);
  if (!kind) throw std::runtime_error("unknown model kind: " + a.model);

  ModelConfig mc;
  mc.kind = *kind;
  mc.num_entities = static_cast<std::int32_t>(sp.loaded.kg.num_entities());
  mc.num_relations = static_cast<std::int32_t>(sp.loaded.kg.num_relations());
  mc.static_dim = a.ds;
  mc.diachronic_dim = (*kind == ModelKind::rotate) ? 0 : a.dt;
  mc.relative_dim = (*kind == ModelKind::rotate || *kind == ModelKind::de_rotate) ? 0 : a.dr;
  mc.validate();

  train::EvalPlan plan;
  plan.slot = a.unknown == "subject" ? eval::UnknownSlot::subject : eval::UnknownSlot::object;
  if (!a.query_relations.empty()) {
    plan.relations = relation_filter(sp.loaded.kg, a.query_relations);
  }

  auto result =
      train::train_loop(sp.loaded.kg, sp.loaded.split, mc, a.cfg, a.include_validation, plan);

  Checkpoint ckpt;
  ckpt.params = std::move(result.params);
  ckpt.relation_labels = sp.loaded.kg.relations().labels();
  ckpt.seed = a.cfg.seed;
  ckpt.rng_state = result.rng_state;
  ckpt.step = result.best_step;
  ckpt.trained_with_validation = a.include_validation;
  ckpt.entity_vocab_hash = vocab_hash(sp.loaded.kg.entities().labels());
  ckpt.relation_vocab_hash = vocab_hash(sp.loaded.kg.relations().labels());
  save_checkpoint(a.out, ckpt);

  const std::string log_path = a.metrics_log.empty() ? a.out + ".log.tsv" : a.metrics_log;
  {
    auto log = io::open_out(log_path);
    log << "# " << provenance("train", a.cfg.seed) << "\n";
    log << "step\tloss\tvalidation_mrr\n";
    for (const auto& row : result.log) {
      log << row.step << '\t' << row.loss;
      if (row.validation_mrr >= 0) {
        log << '\t' << row.validation_mrr;
      } else {
        log << "\t-";
      }
      log << "\n";
    }
  }
  write_resolved_config(a.out, resolved);
  std::cout << "trained " << a.model << " for " << a.cfg.total_steps << " steps; best step "
            << result.best_step;
  if (result.best_validation_mrr >= 0) {
    std::cout << " (validation MRR " << result.best_validation_mrr << ")";
  }
  std::cout << "; checkpoint " << a.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string checkpoint;
  std::string split_dir;
  std::string mode = "interpolated";
  std::string on = "test";
  std::string unknown = "object";
  std::string query_relations;
  std::string scorer = "model";
  std::string out_dir = "eval_out";
  std::uint64_t seed = 0;
  int workers = 1;
};

int run_eval(const EvalArgs& a, const json& resolved) {
  auto sp = load_split_dir(a.split_dir);
  auto ckpt = load_checkpoint(a.checkpoint);

  if (ckpt.entity_vocab_hash != vocab_hash(sp.loaded.kg.entities().labels()) ||
      ckpt.relation_vocab_hash != vocab_hash(sp.loaded.kg.relations().labels())) {
    throw std::runtime_error("checkpoint vocabulary does not match the split directory");
  }
  if (a.mode == "extrapolated" && !ckpt.trained_with_validation) {
    throw std::runtime_error(
        "mode extrapolated expects a checkpoint retrained with --include-validation; "
        "use standard-extrapolated for the no-retrain protocol");
  }
  if (a.mode == "standard-extrapolated" && ckpt.trained_with_validation) {
    throw std::runtime_error(
        "mode standard-extrapolated expects a checkpoint trained without validation");
  }

  std::vector<Quadruple> effective_train = sp.loaded.split.train;
  if (ckpt.trained_with_validation) {
    effective_train.insert(effective_train.end(), sp.loaded.split.validation.begin(),
                           sp.loaded.split.validation.end());
  }
  RelativeContextIndex index(effective_train);
  eval::InteractionIndex interactions(effective_train);
  Timestamp t_q = 0;
  for (const auto& q : effective_train) t_q = std::max(t_q, q.t);

  const auto& eval_tuples =
      a.on == "validation" ? sp.loaded.split.validation : sp.loaded.split.test;
  if (eval_tuples.empty()) throw std::runtime_error("evaluated split is empty");

  std::unordered_set<RelationId> filter;
  const std::unordered_set<RelationId>* filter_ptr = nullptr;
  if (!a.query_relations.empty()) {
    filter = relation_filter(sp.loaded.kg, a.query_relations);
    filter_ptr = &filter;
  }

  eval::EvalContext ctx;
  ctx.kg = &sp.loaded.kg;
  ctx.params = a.scorer == "random" ? nullptr : &ckpt.params;
  ctx.index = &index;
  ctx.interactions = &interactions;
  ctx.opts.t_q = t_q;
  ctx.opts.workers = a.workers;
  ctx.baseline_seed = a.seed;

  std::vector<eval::Query> queries;
  if (a.mode == "time-prediction") {
    ctx.time_candidates = eval::candidates_time(eval_tuples);
    queries = eval::build_time_queries(eval_tuples, filter_ptr);
  } else {
    auto slot = a.unknown == "subject" ? eval::UnknownSlot::subject : eval::UnknownSlot::object;
    queries = eval::build_link_queries(eval_tuples, slot, filter_ptr);
  }
  if (queries.empty()) throw std::runtime_error("no queries after relation filtering");

  auto report = eval::evaluate(ctx, queries);

  fs::create_directories(a.out_dir);
  const std::string header = provenance("eval " + a.mode, a.seed) + " on=" + a.on +
                             " scorer=" + a.scorer + " checkpoint=" + a.checkpoint;
  {
    auto pq = io::open_out(fs::path(a.out_dir) / "per_query.tsv");
    pq << "# " << header << "\n";
    pq << "query\tsubject\trelation\tobject\tt\tunknown\trank\n";
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto& q = queries[i].truth;
      const char* slot =
          queries[i].unknown == eval::UnknownSlot::time
              ? "time"
              : (queries[i].unknown == eval::UnknownSlot::subject ? "subject" : "object");
      pq << i << '\t' << sp.loaded.kg.entities().label_of(q.subject) << '\t'
         << sp.loaded.kg.relations().label_of(q.relation) << '\t'
         << sp.loaded.kg.entities().label_of(q.object) << '\t' << q.t << '\t' << slot << '\t'
         << report.ranks[i] << "\n";
    }
  }
  write_metrics_tsv(fs::path(a.out_dir) / "metrics.tsv", report.metrics, header);
  write_resolved_config(fs::path(a.out_dir) / "eval", resolved);
  std::cout << "queries=" << report.metrics.num_queries << " HITS@1=" << report.metrics.hits1
            << " HITS@3=" << report.metrics.hits3 << " HITS@10=" << report.metrics.hits10
            << " MR=" << report.metrics.mean_rank << " MRR=" << report.metrics.mrr << "\n";
  return 0;
}

int cmd_export_importance(const std::string& checkpoint, const std::string& out_path) {
  auto ckpt = load_checkpoint(checkpoint);
  if (ckpt.params.config.kind != ModelKind::rt_de_rotate &&
      ckpt.params.config.kind != ModelKind::rt_bilinear) {
    throw std::runtime_error("export-importance requires a relative-time checkpoint");
  }
  const auto R = static_cast<std::size_t>(ckpt.params.config.num_relations);
  std::vector<std::string> labels = ckpt.relation_labels;
  if (labels.size() != R) {
    labels.resize(R);
    for (std::size_t r = 0; r < R; ++r) labels[r] = "r" + std::to_string(r);
  }
  auto out = io::open_out(out_path);
  out << "# " << provenance("export-importance", ckpt.seed) << " checkpoint=" << checkpoint
      << "\n";
  out << "relation";
  for (const auto& l : labels) out << '\t' << l;
  out << "\n";
  for (std::size_t r = 0; r < R; ++r) {
    out << labels[r];
    auto row = ckpt.params.importance_row(static_cast<RelationId>(r));
    for (std::size_t c = 0; c < R; ++c) out << '\t' << std::abs(row[c]);
    out << "\n";
  }
  std::cout << "wrote " << R << "x" << R << " importance matrix to " << out_path << "\n";
  return 0;
}

struct GridArgs {
  std::string split_dir;
  std::string model = "rt_de_rotate";
  std::string out = "grid.tsv";
  train::TrainConfig base;
  bool full_grid = false;
  std::string dropout_list, eta_list, omega_list, alpha_list, lambda_list, dims_list, dr_list;
};

int run_grid(const GridArgs& a, const json& resolved) {
  auto sp = load_split_dir(a.split_dir);
  auto kind = parse_model_kind(a.model);
  if (!kind) throw std::runtime_error("unknown model kind: " + a.model);

  auto doubles = [](const std::string& csv, std::vector<double> dflt) {
    if (csv.empty()) return dflt;
    std::vector<double> out;
    for (const auto& s : split_commas(csv)) out.push_back(std::stod(s));
    return out;
  };
  auto dims = [](const std::string& csv, std::vector<std::pair<int, int>> dflt) {
    if (csv.empty()) return dflt;
    std::vector<std::pair<int, int>> out;
    for (const auto& s : split_commas(csv)) {
      auto colon = s.find(':');
      if (colon == std::string::npos) throw std::runtime_error("--dims entries look like ds:dt");
      out.push_back({std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))});
    }
    return out;
  };

  // built-in wide tuning ranges; the base-128 dimension grid keeps d_s + d_t fixed
  std::vector<double> dropouts =
      doubles(a.dropout_list,
              a.full_grid ? std::vector<double>{0.0, 0.2, 0.4} : std::vector<double>{a.base.dropout});
  std::vector<double> etas =
      doubles(a.eta_list, a.full_grid ? std::vector<double>{0.5, 1.0}
                                   : std::vector<double>{a.base.adversarial_temperature});
  std::vector<double> omegas =
      doubles(a.omega_list,
              a.full_grid ? std::vector<double>{3.0, 6.0, 9.0} : std::vector<double>{a.base.margin});
  std::vector<double> alphas =
      doubles(a.alpha_list, a.full_grid ? std::vector<double>{1e-3, 1e-4, 3e-5, 1e-5}
                                     : std::vector<double>{a.base.learning_rate});
  std::vector<double> lambdas =
      doubles(a.lambda_list, a.full_grid ? std::vector<double>{1e-3, 5e-4, 1e-4}
                                      : std::vector<double>{a.base.l3_lambda});
  std::vector<std::pair<int, int>> dim_pairs = dims(
      a.dims_list, a.full_grid
                       ? std::vector<std::pair<int, int>>{{128, 0}, {96, 32}, {64, 64}, {32, 96}, {0, 128}}
                       : std::vector<std::pair<int, int>>{{64, 64}});
  std::vector<double> drs = doubles(
      a.dr_list, a.full_grid ? std::vector<double>{128, 64, 32, 0} : std::vector<double>{32});

  const std::size_t total = dropouts.size() * etas.size() * omegas.size() * alphas.size() *
                            lambdas.size() * dim_pairs.size() * drs.size();
  std::cout << "grid: " << total << " runs of " << a.base.total_steps << " steps each\n";

  auto out = io::open_out(a.out);
  out << "# " << provenance("grid", a.base.seed) << " model=" << a.model << "\n";
  out << "dropout\teta\tomega\talpha\tlambda\tds\tdt\tdr\tbest_step\tbest_validation_mrr\n";

  for (double dropout : dropouts) {
    for (double eta : etas) {
      for (double omega : omegas) {
        for (double alpha : alphas) {
          for (double lambda : lambdas) {
            for (auto [ds, dt] : dim_pairs) {
              for (double drd : drs) {
                ModelConfig mc;
                mc.kind = *kind;
                mc.num_entities = static_cast<std::int32_t>(sp.loaded.kg.num_entities());
                mc.num_relations = static_cast<std::int32_t>(sp.loaded.kg.num_relations());
                mc.static_dim = ds;
                mc.diachronic_dim = (*kind == ModelKind::rotate) ? 0 : dt;
                mc.relative_dim = (*kind == ModelKind::rotate || *kind == ModelKind::de_rotate)
                                      ? 0
                                      : static_cast<int>(drd);
                if (mc.base_dim() <= 0) continue;
                if (*kind == ModelKind::rotate && dt != 0) continue;

                train::TrainConfig cfg = a.base;
                cfg.dropout = dropout;
                cfg.adversarial_temperature = eta;
                cfg.margin = omega;
                cfg.learning_rate = alpha;
                cfg.l3_lambda = lambda;
                auto result = train::train_loop(sp.loaded.kg, sp.loaded.split, mc, cfg);
                out << dropout << '\t' << eta << '\t' << omega << '\t' << alpha << '\t' << lambda
                    << '\t' << mc.static_dim << '\t' << mc.diachronic_dim << '\t'
                    << mc.relative_dim << '\t' << result.best_step << '\t'
                    << result.best_validation_mrr << "\n";
                out.flush();
              }
            }
          }
        }
      }
    }
  }
  write_resolved_config(a.out, resolved);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal knowledge-graph embedding pipeline"};
  app.require_subcommand(1);

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "extract tuples from JSON-lines event files");
  std::string rules_path, ingest_out, relations = "default";
  std::vector<std::string> event_paths;
  std::uint64_t ingest_seed = 0;
  ingest_cmd->add_option("--rules", rules_path, "extraction rule table (TSV)")->required();
  ingest_cmd->add_option("--events", event_paths, "event files (.jsonl, optionally gzipped)")
      ->required();
  ingest_cmd->add_option("--out-dir", ingest_out, "output directory")->required();
  ingest_cmd->add_option("--relations", relations, "default | all | comma-separated codes");
  ingest_cmd->add_option("--seed", ingest_seed, "provenance seed");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "summary statistics of a tuple file");
  std::string stats_tuples, stats_types, stats_out;
  stats_cmd->add_option("--tuples", stats_tuples)->required();
  stats_cmd->add_option("--types", stats_types)->required();
  stats_cmd->add_option("--out", stats_out, "write TSV here instead of stdout");

  // split
  auto* split_cmd = app.add_subcommand("split", "train/validation/test split");
  std::string split_tuples, split_types, split_mode = "random", split_ratios = "0.9,0.05,0.05",
                                         split_out;
  std::uint64_t split_seed = 0;
  split_cmd->add_option("--tuples", split_tuples)->required();
  split_cmd->add_option("--types", split_types)->required();
  split_cmd->add_option("--mode", split_mode, "random | temporal");
  split_cmd->add_option("--ratios", split_ratios, "three comma-separated fractions");
  split_cmd->add_option("--seed", split_seed);
  split_cmd->add_option("--out-dir", split_out)->required();

  // sample-snowball
  auto* snow_cmd = app.add_subcommand("sample-snowball", "degree-prioritized snowball sample");
  std::string snow_tuples, snow_types, snow_out;
  std::int64_t snow_n = 0;
  int snow_s = 1, snow_k = 1;
  std::uint64_t snow_seed = 0;
  snow_cmd->add_option("--tuples", snow_tuples)->required();
  snow_cmd->add_option("--types", snow_types)->required();
  snow_cmd->add_option("--n", snow_n, "target node count")->required();
  snow_cmd->add_option("--s", snow_s, "growth size");
  snow_cmd->add_option("--k", snow_k, "initial seed count");
  snow_cmd->add_option("--seed", snow_seed);
  snow_cmd->add_option("--out-dir", snow_out)->required();

  // sample-temporal
  auto* temp_cmd = app.add_subcommand("sample-temporal", "repository popularity sample");
  std::string temp_tuples, temp_types, temp_out;
  double temp_w1 = 1.0, temp_w2 = 1.0;
  std::int64_t temp_n = 0;
  temp_cmd->add_option("--tuples", temp_tuples)->required();
  temp_cmd->add_option("--types", temp_types)->required();
  temp_cmd->add_option("--w1", temp_w1, "size importance factor");
  temp_cmd->add_option("--w2", temp_w2, "time-span importance factor");
  temp_cmd->add_option("--n", temp_n, "target node count")->required();
  temp_cmd->add_option("--out-dir", temp_out)->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "train an embedding model");
  TrainArgs ta;
  std::string train_config;
  train_cmd->add_option("--split-dir", ta.split_dir)->required();
  train_cmd->add_option("--config", train_config, "JSON config file (flags override)");
  auto* o_model = train_cmd->add_option("--model", ta.model, "rotate | de_rotate | rt_de_rotate");
  auto* o_ds = train_cmd->add_option("--ds", ta.ds, "static dimension");
  auto* o_dt = train_cmd->add_option("--dt", ta.dt, "diachronic dimension");
  auto* o_dr = train_cmd->add_option("--dr", ta.dr, "relative-time dimension");
  auto* o_eta = train_cmd->add_option("--eta", ta.cfg.adversarial_temperature);
  auto* o_omega = train_cmd->add_option("--omega", ta.cfg.margin);
  auto* o_alpha = train_cmd->add_option("--alpha", ta.cfg.learning_rate);
  auto* o_lambda = train_cmd->add_option("--lambda", ta.cfg.l3_lambda);
  auto* o_dropout = train_cmd->add_option("--dropout", ta.cfg.dropout);
  auto* o_nega = train_cmd->add_option("--neg-entity", ta.cfg.neg_time_agnostic);
  auto* o_negt = train_cmd->add_option("--neg-time", ta.cfg.neg_time_dependent);
  auto* o_batch = train_cmd->add_option("--batch", ta.cfg.batch_size);
  auto* o_warm = train_cmd->add_option("--warmup-steps", ta.cfg.warmup_steps);
  auto* o_decay = train_cmd->add_option("--warmup-decay", ta.cfg.warmup_decay);
  auto* o_steps = train_cmd->add_option("--steps", ta.cfg.total_steps);
  auto* o_vevery = train_cmd->add_option("--validate-every", ta.cfg.validation_every);
  auto* o_seed = train_cmd->add_option("--seed", ta.cfg.seed);
  auto* o_workers = train_cmd->add_option("--workers", ta.cfg.workers);
  train_cmd->add_flag("--include-validation", ta.include_validation,
                      "retrain on train + validation (extrapolated protocol)");
  train_cmd->add_option("--unknown", ta.unknown, "validation query slot: subject | object");
  train_cmd->add_option("--query-relations", ta.query_relations,
                        "comma-separated relation codes for validation queries");
  train_cmd->add_option("--out", ta.out, "checkpoint path");
  train_cmd->add_option("--metrics-log", ta.metrics_log, "TSV log path");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "rank held-out queries against a checkpoint");
  EvalArgs ea;
  eval_cmd->add_option("--checkpoint", ea.checkpoint)->required();
  eval_cmd->add_option("--split-dir", ea.split_dir)->required();
  eval_cmd->add_option("--mode", ea.mode,
                       "interpolated | extrapolated | standard-extrapolated | time-prediction");
  eval_cmd->add_option("--on", ea.on, "test | validation");
  eval_cmd->add_option("--unknown", ea.unknown, "link query slot: subject | object");
  eval_cmd->add_option("--query-relations", ea.query_relations);
  eval_cmd->add_option("--scorer", ea.scorer, "model | random");
  eval_cmd->add_option("--out-dir", ea.out_dir);
  eval_cmd->add_option("--seed", ea.seed, "baseline scorer seed");
  eval_cmd->add_option("--workers", ea.workers);

  // export-importance
  auto* export_cmd =
      app.add_subcommand("export-importance", "write |W_P| as TSV with relation labels");
  std::string export_ckpt, export_out = "importance.tsv";
  export_cmd->add_option("--checkpoint", export_ckpt)->required();
  export_cmd->add_option("--out", export_out);

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "hyperparameter sweep");
  GridArgs ga;
  grid_cmd->add_option("--split-dir", ga.split_dir)->required();
  grid_cmd->add_option("--model", ga.model);
  grid_cmd->add_option("--out", ga.out);
  grid_cmd->add_option("--steps", ga.base.total_steps)->required();
  grid_cmd->add_option("--validate-every", ga.base.validation_every);
  grid_cmd->add_option("--batch", ga.base.batch_size);
  grid_cmd->add_option("--neg-entity", ga.base.neg_time_agnostic);
  grid_cmd->add_option("--neg-time", ga.base.neg_time_dependent);
  grid_cmd->add_option("--warmup-steps", ga.base.warmup_steps);
  grid_cmd->add_option("--seed", ga.base.seed);
  grid_cmd->add_option("--workers", ga.base.workers);
  grid_cmd->add_flag("--full-grid", ga.full_grid, "sweep the built-in wide tuning ranges");
  grid_cmd->add_option("--dropout", ga.dropout_list, "comma list");
  grid_cmd->add_option("--eta", ga.eta_list, "comma list");
  grid_cmd->add_option("--omega", ga.omega_list, "comma list");
  grid_cmd->add_option("--alpha", ga.alpha_list, "comma list");
  grid_cmd->add_option("--lambda", ga.lambda_list, "comma list");
  grid_cmd->add_option("--dims", ga.dims_list, "comma list of ds:dt");
  grid_cmd->add_option("--dr", ga.dr_list, "comma list");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) return cmd_ingest(rules_path, event_paths, ingest_out, relations, ingest_seed);
    if (*stats_cmd) return cmd_stats(stats_tuples, stats_types, stats_out);
    if (*split_cmd) {
      return cmd_split(split_tuples, split_types, split_mode, split_ratios, split_seed, split_out);
    }
    if (*snow_cmd) {
      return cmd_sample_snowball(snow_tuples, snow_types, snow_n, snow_s, snow_k, snow_seed,
                                 snow_out);
    }
    if (*temp_cmd) {
      return cmd_sample_temporal(temp_tuples, temp_types, temp_w1, temp_w2, temp_n, temp_out);
    }
    if (*train_cmd) {
      json cfgfile = load_config_file(train_config);
      merge_option(o_model, cfgfile, "model", ta.model);
      merge_option(o_ds, cfgfile, "ds", ta.ds);
      merge_option(o_dt, cfgfile, "dt", ta.dt);
      merge_option(o_dr, cfgfile, "dr", ta.dr);
      merge_option(o_eta, cfgfile, "eta", ta.cfg.adversarial_temperature);
      merge_option(o_omega, cfgfile, "omega", ta.cfg.margin);
      merge_option(o_alpha, cfgfile, "alpha", ta.cfg.learning_rate);
      merge_option(o_lambda, cfgfile, "lambda", ta.cfg.l3_lambda);
      merge_option(o_dropout, cfgfile, "dropout", ta.cfg.dropout);
      merge_option(o_nega, cfgfile, "neg_entity", ta.cfg.neg_time_agnostic);
      merge_option(o_negt, cfgfile, "neg_time", ta.cfg.neg_time_dependent);
      merge_option(o_batch, cfgfile, "batch", ta.cfg.batch_size);
      merge_option(o_warm, cfgfile, "warmup_steps", ta.cfg.warmup_steps);
      merge_option(o_decay, cfgfile, "warmup_decay", ta.cfg.warmup_decay);
      merge_option(o_steps, cfgfile, "steps", ta.cfg.total_steps);
      merge_option(o_vevery, cfgfile, "validate_every", ta.cfg.validation_every);
      merge_option(o_seed, cfgfile, "seed", ta.cfg.seed);
      merge_option(o_workers, cfgfile, "workers", ta.cfg.workers);
      json resolved{{"model", ta.model},
                    {"ds", ta.ds},
                    {"dt", ta.dt},
                    {"dr", ta.dr},
                    {"eta", ta.cfg.adversarial_temperature},
                    {"omega", ta.cfg.margin},
                    {"alpha", ta.cfg.learning_rate},
                    {"lambda", ta.cfg.l3_lambda},
                    {"dropout", ta.cfg.dropout},
                    {"neg_entity", ta.cfg.neg_time_agnostic},
                    {"neg_time", ta.cfg.neg_time_dependent},
                    {"batch", ta.cfg.batch_size},
                    {"warmup_steps", ta.cfg.warmup_steps},
                    {"warmup_decay", ta.cfg.warmup_decay},
                    {"steps", ta.cfg.total_steps},
                    {"validate_every", ta.cfg.validation_every},
                    {"seed", ta.cfg.seed},
                    {"workers", ta.cfg.workers},
                    {"include_validation", ta.include_validation},
                    {"unknown", ta.unknown},
                    {"query_relations", ta.query_relations},
                    {"split_dir", ta.split_dir}};
      return run_train(ta, resolved);
    }
    if (*eval_cmd) {
      json resolved{{"checkpoint", ea.checkpoint}, {"split_dir", ea.split_dir},
                    {"mode", ea.mode},             {"on", ea.on},
                    {"unknown", ea.unknown},       {"query_relations", ea.query_relations},
                    {"scorer", ea.scorer},         {"seed", ea.seed},
                    {"workers", ea.workers}};
      return run_eval(ea, resolved);
    }
    if (*export_cmd) return cmd_export_importance(export_ckpt, export_out);
    if (*grid_cmd) {
      json resolved{{"model", ga.model}, {"steps", ga.base.total_steps}, {"full_grid", ga.full_grid}};
      return run_grid(ga, resolved);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
