// hyperwalk command-line front end.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error (bad flags,
// missing input files, invalid settings).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperwalk/corpus.hpp"
#include "hyperwalk/embedding.hpp"
#include "hyperwalk/eval.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/pipeline.hpp"
#include "hyperwalk/synthetic.hpp"
#include "hyperwalk/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hyperwalk;

namespace {

// Thrown for problems that are the caller's fault but only detectable after
// parsing (unknown edge-type label, inconsistent settings).
struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string nodes, edges, out = ".";
  PipelineConfig pipe;
  std::size_t dim = 10;
  std::vector<std::size_t> dims;
  std::size_t negatives = 20;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  bool negatives_from_all = false;
  bool dump_walks = false;

  std::string embeddings;
  std::vector<std::string> edge_types;
  std::size_t max_neg = 1'000'000;

  double fraction = 0.2;
  std::string split_dir;
  std::optional<std::uint64_t> split_seed;

  std::string param;
  std::vector<double> values;
  std::string task = "reconstruct";

  std::vector<std::size_t> axes{0, 1};
  std::vector<std::string> region_types;
  std::vector<double> boundaries{2.0, 4.0, 6.0};
  std::string degree_type;

  std::string kind = "block";
  std::size_t per_block = 100;
  double p_in = 0.2, p_out = 0.01;
  std::size_t authors = 400, papers = 600, venues = 8;
};

// ---------------------------------------------------------------- options

void add_graph_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--nodes", o.nodes, "Node file: node_id<TAB>type")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HYPERWALK_NODES");
  cmd->add_option("--edges", o.edges, "Edge file: src<TAB>dst[<TAB>edge_type]")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("HYPERWALK_EDGES");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str()->envname("HYPERWALK_OUT");
}

void add_training_options(CLI::App* cmd, Options& o) {
  auto& p = o.pipe;
  cmd->add_option("--walks", p.walk.walks_per_node, "Walks per node")
      ->capture_default_str()
      ->envname("HYPERWALK_WALKS");
  cmd->add_option("--walk-length", p.walk.walk_length, "Walk length")
      ->capture_default_str()
      ->envname("HYPERWALK_WALK_LENGTH");
  cmd->add_option("--window", p.sampler.window, "Context window")
      ->capture_default_str()
      ->envname("HYPERWALK_WINDOW");
  cmd->add_option("--negatives", o.negatives, "Negative samples per positive pair")
      ->capture_default_str()
      ->envname("HYPERWALK_NEGATIVES");
  cmd->add_option("--frequency-exponent", p.sampler.frequency_exponent,
                  "Negative sampling weight is frequency^exponent")
      ->capture_default_str()
      ->envname("HYPERWALK_FREQUENCY_EXPONENT");
  cmd->add_flag("--negatives-from-all", o.negatives_from_all,
                "Draw negatives from every node but the anchor, ignoring co-occurrence")
      ->envname("HYPERWALK_NEGATIVES_FROM_ALL");
  cmd->add_option("--lr", p.train.lr, "Learning rate")->capture_default_str()->envname("HYPERWALK_LR");
  cmd->add_option("--batch", p.train.batch_size, "Batch size")
      ->capture_default_str()
      ->envname("HYPERWALK_BATCH");
  cmd->add_option("--epochs", p.train.epochs, "Epochs")->capture_default_str()->envname("HYPERWALK_EPOCHS");
  cmd->add_option("--init-scale", p.train.init_scale, "Initial spatial coordinate range")
      ->capture_default_str()
      ->envname("HYPERWALK_INIT_SCALE");
  cmd->add_option("--seed", o.seed, "Run seed")->capture_default_str()->envname("HYPERWALK_SEED");
  cmd->add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
      ->capture_default_str()
      ->envname("HYPERWALK_THREADS");
}

CLI::Option* add_dim_option(CLI::App* cmd, Options& o) {
  return cmd->add_option("--dim", o.dim, "Embedding dimension")
      ->capture_default_str()
      ->envname("HYPERWALK_DIM");
}

void add_dims_option(CLI::App* cmd, Options& o) {
  cmd->add_option("--dims", o.dims, "Comma-separated list of dimensions")
      ->delimiter(',')
      ->envname("HYPERWALK_DIMS");
}

void add_edge_type_option(CLI::App* cmd, Options& o) {
  cmd->add_option("--edge-types", o.edge_types, "Edge-type labels to evaluate (default: all)")
      ->delimiter(',');
}

// Folds the flat flags into the pipeline config and validates it.
void finalize(Options& o) {
  o.pipe.set_seed(o.seed);
  o.pipe.set_negatives(o.negatives);
  o.pipe.set_threads(o.threads);
  o.pipe.train.dim = o.dim;
  o.pipe.train.exclude_positive_pairs = !o.negatives_from_all;
  try {
    o.pipe.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  for (std::size_t d : o.dims)
    if (d < 2) throw UsageError("every dimension must be at least 2");
}

// ---------------------------------------------------------------- helpers

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("'" + path.string() + "': " + e.what());
  }
}

TypedGraph load(const Options& o) {
  auto [g, warnings] = load_graph(o.nodes, o.edges);
  if (warnings.duplicate_edges)
    std::cerr << "warning: " << warnings.duplicate_edges << " duplicate edge(s) collapsed\n";
  if (warnings.self_loops) std::cerr << "warning: " << warnings.self_loops << " self-loop(s) dropped\n";
  return std::move(g);
}

std::vector<TypeId> target_types(const TypedGraph& g, const std::vector<std::string>& labels) {
  std::vector<TypeId> out;
  if (labels.empty()) {
    for (TypeId t = 0; t < g.num_edge_types(); ++t) out.push_back(t);
    return out;
  }
  for (const auto& label : labels) {
    const auto t = g.find_edge_type(label);
    if (!t) {
      std::string known;
      for (const auto& et : g.edge_types()) known += (known.empty() ? "" : ", ") + et.label;
      throw UsageError("unknown edge type '" + label + "' (known: " + known + ")");
    }
    out.push_back(*t);
  }
  return out;
}

std::vector<std::size_t> dimensions(const Options& o) {
  return o.dims.empty() ? std::vector<std::size_t>{o.dim} : o.dims;
}

json manifest(const Options& o, const std::string& command, const TypedGraph& g,
              const std::vector<std::size_t>& dims, const std::vector<std::string>& outputs,
              int argc, char** argv) {
  json j;
  j["tool"] = "hyperwalk";
  j["version"] = kVersion;
  j["subcommand"] = command;
  j["command_line"] = std::vector<std::string>(argv, argv + argc);
  j["inputs"] = {{"nodes", o.nodes},
                 {"edges", o.edges},
                 {"num_nodes", g.num_nodes()},
                 {"num_edges", g.num_edges()}};
  j["config"] = o.pipe;
  j["dimensions"] = dims;
  // Walks and gradient reductions run in a fixed order for any thread
  // count, so every run is reproducible from this manifest.
  j["deterministic"] = true;
  j["outputs"] = outputs;
  return j;
}

fs::path prepare_out(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

// Trains one embedding and writes it with its log. Returns the table.
EmbeddingTable train_to_files(const TypedGraph& g, PipelineConfig cfg, std::size_t dim,
                              const fs::path& emb_path, const fs::path& log_path,
                              const fs::path* walk_path = nullptr) {
  cfg.train.dim = dim;
  std::ofstream log(log_path);
  if (!log) throw Error("cannot write '" + log_path.string() + "'");
  std::vector<Walk> walks;
  auto result = embed_graph(
      g, cfg,
      [&](const EpochStats& s) {
        log << json{{"epoch", s.epoch}, {"mean_loss", s.mean_loss}, {"wall_time_s", s.wall_time_s}}.dump()
            << '\n'
            << std::flush;
        std::cerr << "d=" << dim << " epoch " << s.epoch << ": mean loss " << s.mean_loss << " ("
                  << s.wall_time_s << " s)";
        if (s.short_negative_samples) std::cerr << ", " << s.short_negative_samples << " short negative samples";
        std::cerr << '\n';
      },
      walk_path ? &walks : nullptr);
  if (walk_path) write_walks(g, walks, walk_path->string());
  write_embeddings(g, result.table, emb_path.string());
  return std::move(result.table);
}

std::string suffix(std::size_t dim) { return "_d" + std::to_string(dim); }

// ---------------------------------------------------------------- train

int cmd_train(Options& o, int argc, char** argv) {
  finalize(o);
  const auto g = load(o);
  const auto dir = prepare_out(o);
  const fs::path walks_path = dir / "walks.txt";
  train_to_files(g, o.pipe, o.dim, dir / "embeddings.tsv", dir / "train_log.jsonl",
                 o.dump_walks ? &walks_path : nullptr);
  std::vector<std::string> outputs{"embeddings.tsv", "train_log.jsonl"};
  if (o.dump_walks) outputs.push_back("walks.txt");
  write_json(dir / "manifest.json", manifest(o, "train", g, {o.dim}, outputs, argc, argv));
  std::cerr << "wrote " << (dir / "embeddings.tsv").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- reconstruct

json reconstruct_all(const TypedGraph& g, const EmbeddingTable& emb, const std::vector<TypeId>& targets,
                     std::size_t max_neg, std::uint64_t seed) {
  json reports = json::array();
  const SeedSequence seeds(seed);
  for (TypeId t : targets) {
    Engine rng = seeds.stream("reconstruct", t, emb.dim());
    reports.push_back(reconstruct(g, emb, t, max_neg, rng));
  }
  return reports;
}

int cmd_reconstruct(Options& o, bool dim_given, int argc, char** argv) {
  finalize(o);
  const auto g = load(o);
  const auto targets = target_types(g, o.edge_types);
  const auto dir = prepare_out(o);
  json reports = json::array();
  std::vector<std::string> outputs;
  std::vector<std::size_t> dims;
  if (!o.embeddings.empty()) {
    if (!o.dims.empty()) throw UsageError("--dims cannot be combined with --embeddings");
    const auto emb = read_embeddings(g, o.embeddings, dim_given ? o.dim : 0);
    dims.push_back(emb.dim());
    for (auto& r : reconstruct_all(g, emb, targets, o.max_neg, o.seed)) reports.push_back(r);
  } else {
    dims = dimensions(o);
    for (std::size_t d : dims) {
      const auto emb_name = "embeddings" + suffix(d) + ".tsv";
      const auto log_name = "train_log" + suffix(d) + ".jsonl";
      const auto emb = train_to_files(g, o.pipe, d, dir / emb_name, dir / log_name);
      outputs.push_back(emb_name);
      outputs.push_back(log_name);
      for (auto& r : reconstruct_all(g, emb, targets, o.max_neg, o.seed)) reports.push_back(r);
    }
  }
  write_json(dir / "reconstruction.json", reports);
  outputs.push_back("reconstruction.json");
  write_json(dir / "manifest.json", manifest(o, "reconstruct", g, dims, outputs, argc, argv));
  for (const auto& r : reports)
    std::cout << r["edge_type"].get<std::string>() << "\td=" << r["dimension"] << "\tauc=" << r["auc"] << '\n';
  return 0;
}

// ---------------------------------------------------------------- linkpred

std::vector<Edge> read_edge_list(const TypedGraph& g, const fs::path& path) {
  std::ifstream in = hyperwalk::detail::open_input(path.string());
  std::vector<Edge> out;
  std::string raw;
  for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
    const auto line = hyperwalk::detail::trim_right(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = hyperwalk::detail::split_tabs(line);
    if (cols.size() != 3) throw ParseError(path.string(), line_no, "expected src, dst and edge type");
    const auto u = g.find_node(cols[0]);
    const auto v = g.find_node(cols[1]);
    const auto t = g.find_edge_type(cols[2]);
    if (!u || !v) throw ParseError(path.string(), line_no, "unknown node id");
    if (!t) throw ParseError(path.string(), line_no, "unknown edge type '" + std::string(cols[2]) + "'");
    out.push_back({*u, *v, *t});
  }
  return out;
}

struct PersistedSplit {
  LinkSplit split;
  bool reused = false;
};

// Loads the split in `dir` when one exists, otherwise draws and writes one.
PersistedSplit obtain_split(const TypedGraph& g, const Options& o, const std::vector<TypeId>& targets,
                            const fs::path& dir) {
  PersistedSplit out;
  const auto meta_path = dir / "split.json";
  if (fs::exists(meta_path)) {
    const auto meta = read_json(meta_path);
    auto& s = out.split;
    for (const auto& label : meta.at("targets")) s.targets.push_back(target_types(g, {label})[0]);
    s.warnings = meta.value("warnings", std::vector<std::string>{});
    s.removed_edges = read_edge_list(g, dir / "removed_edges.tsv");
    s.sampled_non_edges = read_edge_list(g, dir / "non_edges.tsv");
    s.train_graph = g.with_edges(read_edge_list(g, dir / "train_edges.tsv"));
    out.reused = true;
    std::cerr << "reusing split in " << dir.string() << '\n';
    return out;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create split directory '" + dir.string() + "': " + ec.message());
  const std::uint64_t seed = o.split_seed.value_or(o.seed);
  Engine rng = SeedSequence(seed).stream("split");
  out.split = make_link_split(g, targets, o.fraction, rng);
  const auto& s = out.split;
  write_edges(s.train_graph, s.train_graph.edges(), (dir / "train_edges.tsv").string());
  write_edges(g, s.removed_edges, (dir / "removed_edges.tsv").string());
  write_edges(g, s.sampled_non_edges, (dir / "non_edges.tsv").string());
  json meta;
  meta["fraction"] = o.fraction;
  meta["seed"] = seed;
  meta["targets"] = json::array();
  for (TypeId t : s.targets) meta["targets"].push_back(g.edge_types()[t].label);
  meta["warnings"] = s.warnings;
  meta["removed"] = s.removed_edges.size();
  meta["non_edges"] = s.sampled_non_edges.size();
  write_json(meta_path, meta);
  return out;
}

int cmd_linkpred(Options& o, bool dim_given, int argc, char** argv) {
  finalize(o);
  if (!(o.fraction > 0.0 && o.fraction < 1.0)) throw UsageError("--fraction must be in (0, 1)");
  const auto g = load(o);
  const auto targets = target_types(g, o.edge_types);
  const auto dir = prepare_out(o);
  const fs::path split_dir = o.split_dir.empty() ? dir / "split" : fs::path(o.split_dir);
  const auto persisted = obtain_split(g, o, targets, split_dir);
  const LinkSplit& split = persisted.split;
  for (const auto& w : split.warnings) std::cerr << "warning: " << w << '\n';

  json reports = json::array();
  std::vector<std::string> outputs;
  std::vector<std::size_t> dims;
  auto evaluate = [&](const EmbeddingTable& emb) {
    for (TypeId t : split.targets) {
      if (split.removed_of(t).empty()) {
        std::cerr << "warning: no held-out edges of type '" << g.edge_types()[t].label << "'; skipped\n";
        continue;
      }
      reports.push_back(link_prediction_eval(split, emb, t));
    }
  };
  if (!o.embeddings.empty()) {
    if (!o.dims.empty()) throw UsageError("--dims cannot be combined with --embeddings");
    const auto emb = read_embeddings(split.train_graph, o.embeddings, dim_given ? o.dim : 0);
    dims.push_back(emb.dim());
    evaluate(emb);
  } else {
    dims = dimensions(o);
    for (std::size_t d : dims) {
      const auto emb_name = "embeddings" + suffix(d) + ".tsv";
      const auto log_name = "train_log" + suffix(d) + ".jsonl";
      evaluate(train_to_files(split.train_graph, o.pipe, d, dir / emb_name, dir / log_name));
      outputs.push_back(emb_name);
      outputs.push_back(log_name);
    }
  }
  write_json(dir / "linkpred.json", reports);
  outputs.push_back("linkpred.json");
  auto m = manifest(o, "linkpred", g, dims, outputs, argc, argv);
  m["split"] = {{"directory", split_dir.string()},
                {"reused", persisted.reused},
                {"fraction", o.fraction},
                {"seed", o.split_seed.value_or(o.seed)}};
  write_json(dir / "manifest.json", m);
  for (const auto& r : reports)
    std::cout << r["edge_type"].get<std::string>() << "\td=" << r["dimension"] << "\tauc=" << r["auc"] << '\n';
  return 0;
}

// ---------------------------------------------------------------- sweep

const std::map<std::string, std::string>& sweep_aliases() {
  static const std::map<std::string, std::string> m{
      {"batch_size", "batch_size"}, {"batch", "batch_size"},
      {"window", "window"},         {"context_window", "window"},
      {"walks", "walks_per_node"},  {"walks_per_node", "walks_per_node"},
      {"walk_length", "walk_length"}, {"negatives", "negatives"}};
  return m;
}

void apply_sweep_value(PipelineConfig& cfg, const std::string& param, double value) {
  if (!(value >= 1.0) || value != std::floor(value))
    throw UsageError("sweep values for '" + param + "' must be positive integers");
  const auto v = static_cast<std::size_t>(value);
  if (param == "batch_size") cfg.train.batch_size = v;
  else if (param == "window") cfg.sampler.window = v;
  else if (param == "walks_per_node") cfg.walk.walks_per_node = v;
  else if (param == "walk_length") cfg.walk.walk_length = v;
  else if (param == "negatives") cfg.set_negatives(v);
}

double mean_auc(const json& reports) {
  double s = 0.0;
  for (const auto& r : reports) s += r["auc"].get<double>();
  return reports.empty() ? 0.0 : s / static_cast<double>(reports.size());
}

int cmd_sweep(Options& o, bool dim_given, int argc, char** argv) {
  if (!dim_given) o.dim = 5;
  finalize(o);
  const auto it = sweep_aliases().find(o.param);
  if (it == sweep_aliases().end())
    throw UsageError("unknown sweep parameter '" + o.param +
                     "' (expected batch_size, window, walks_per_node, walk_length or negatives)");
  const std::string param = it->second;
  if (o.values.empty()) throw UsageError("--values must list at least one value");
  if (o.task != "reconstruct" && o.task != "linkpred")
    throw UsageError("--task must be 'reconstruct' or 'linkpred'");
  const auto g = load(o);
  const auto targets = target_types(g, o.edge_types);
  const auto dir = prepare_out(o);

  std::optional<LinkSplit> split;
  if (o.task == "linkpred") {
    const fs::path split_dir = o.split_dir.empty() ? dir / "split" : fs::path(o.split_dir);
    split = obtain_split(g, o, targets, split_dir).split;
  }
  const TypedGraph& train_graph = split ? split->train_graph : g;

  json points = json::array();
  for (double value : o.values) {
    PipelineConfig cfg = o.pipe;
    apply_sweep_value(cfg, param, value);
    try {
      cfg.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    auto emb = embed_graph(train_graph, cfg).table;
    json reports = json::array();
    for (TypeId t : targets) {
      if (split) {
        if (!split->removed_of(t).empty()) reports.push_back(link_prediction_eval(*split, emb, t));
      } else {
        Engine rng = SeedSequence(o.seed).stream("reconstruct", t, emb.dim());
        reports.push_back(reconstruct(g, emb, t, o.max_neg, rng));
      }
    }
    json point = {{"value", value}, {"auc", mean_auc(reports)}, {"reports", reports}, {"config", cfg}};
    std::cerr << param << "=" << value << ": mean auc " << point["auc"] << '\n';
    std::cout << param << '\t' << value << '\t' << point["auc"] << '\n';
    points.push_back(point);
  }
  json out = {{"parameter", param}, {"task", o.task}, {"dimension", o.dim}, {"points", points}};
  write_json(dir / "sweep.json", out);
  write_json(dir / "manifest.json", manifest(o, "sweep", g, {o.dim}, {"sweep.json"}, argc, argv));
  return 0;
}

// ---------------------------------------------------------------- project

int cmd_project(Options& o, int argc, char** argv) {
  const auto g = load(o);
  const auto emb = read_embeddings(g, o.embeddings);
  if (o.axes.size() != 2) throw UsageError("--axes takes exactly two spatial axis indices");
  if (o.axes[0] >= emb.dim() || o.axes[1] >= emb.dim() || o.axes[0] == o.axes[1])
    throw UsageError("--axes must name two distinct axes below the embedding dimension " +
                     std::to_string(emb.dim()));
  if (!std::is_sorted(o.boundaries.begin(), o.boundaries.end()))
    throw UsageError("--boundaries must be ascending");
  const auto dir = prepare_out(o);
  export_projection(g, emb, (dir / "projection.tsv").string(), o.axes[0], o.axes[1]);

  std::optional<TypeId> degree_type;
  if (!o.degree_type.empty()) {
    degree_type = g.find_node_type(o.degree_type);
    if (!degree_type) throw UsageError("unknown node type '" + o.degree_type + "'");
  }
  std::vector<TypeId> types;
  if (o.region_types.empty()) {
    for (TypeId t = 0; t < g.num_node_types(); ++t) types.push_back(t);
  } else {
    for (const auto& label : o.region_types) {
      const auto t = g.find_node_type(label);
      if (!t) throw UsageError("unknown node type '" + label + "'");
      types.push_back(*t);
    }
  }
  json regions = json::object();
  for (TypeId t : types) {
    json s = region_stats(g, emb, t, o.boundaries, degree_type);
    s["degree_type"] = degree_type ? json(g.node_types()[*degree_type].label) : json(nullptr);
    regions[g.node_types()[t].label] = s;
  }
  write_json(dir / "regions.json", regions);
  auto m = manifest(o, "project", g, {emb.dim()}, {"projection.tsv", "regions.json"}, argc, argv);
  m.erase("config");
  m["embeddings"] = o.embeddings;
  write_json(dir / "manifest.json", m);
  std::cout << regions.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- generate

int cmd_generate(Options& o) {
  TypedGraph g;
  if (o.kind == "block") {
    g = synthetic::block_graph(
        {.nodes_per_type_per_block = o.per_block, .p_in = o.p_in, .p_out = o.p_out, .seed = o.seed});
  } else if (o.kind == "skewed") {
    g = synthetic::skewed_type_graph({.seed = o.seed});
  } else if (o.kind == "bibliographic") {
    g = synthetic::bibliographic_graph(
        {.authors = o.authors, .papers = o.papers, .venues = o.venues, .seed = o.seed});
  } else {
    throw UsageError("unknown graph kind '" + o.kind + "' (expected block, skewed or bibliographic)");
  }
  const auto dir = prepare_out(o);
  save_graph(g, (dir / "nodes.tsv").string(), (dir / "edges.tsv").string());
  std::cerr << "wrote " << g.num_nodes() << " nodes and " << g.num_edges() << " edges to "
            << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic embeddings of heterogeneous networks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);
  Options o;

  auto* train = app.add_subcommand("train", "Walk, build the corpus, train and write embeddings");
  add_graph_options(train, o);
  add_dim_option(train, o);
  add_training_options(train, o);
  train->add_flag("--dump-walks", o.dump_walks, "Also write walks.txt");

  auto* recon = app.add_subcommand("reconstruct", "Network reconstruction AUC per edge type");
  add_graph_options(recon, o);
  auto* recon_dim = add_dim_option(recon, o);
  add_dims_option(recon, o);
  add_training_options(recon, o);
  add_edge_type_option(recon, o);
  recon->add_option("--embeddings", o.embeddings, "Evaluate this embedding file instead of training")
      ->check(CLI::ExistingFile);
  recon->add_option("--max-neg", o.max_neg, "Sample this many non-edges when there are more")
      ->capture_default_str();

  auto* link = app.add_subcommand("linkpred", "Hold out edges, train on the rest, score them");
  add_graph_options(link, o);
  auto* link_dim = add_dim_option(link, o);
  add_dims_option(link, o);
  add_training_options(link, o);
  add_edge_type_option(link, o);
  link->add_option("--fraction", o.fraction, "Fraction of each target type to hold out")
      ->capture_default_str()
      ->envname("HYPERWALK_FRACTION");
  link->add_option("--split-dir", o.split_dir, "Reuse or create the split here (default: <out>/split)");
  link->add_option("--split-seed", o.split_seed, "Seed for the split (default: --seed)");
  link->add_option("--embeddings", o.embeddings, "Evaluate this embedding of the training graph")
      ->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "AUC as one parameter varies, others at defaults");
  add_graph_options(sweep, o);
  auto* sweep_dim = add_dim_option(sweep, o)->default_str("5");
  add_training_options(sweep, o);
  add_edge_type_option(sweep, o);
  sweep->add_option("--param", o.param, "batch_size, window, walks_per_node, walk_length or negatives")
      ->required();
  sweep->add_option("--values", o.values, "Comma-separated values")->delimiter(',')->required();
  sweep->add_option("--task", o.task, "reconstruct or linkpred")->capture_default_str();
  sweep->add_option("--max-neg", o.max_neg, "Non-edge cap for reconstruction")->capture_default_str();
  sweep->add_option("--fraction", o.fraction, "Held-out fraction for linkpred")->capture_default_str();
  sweep->add_option("--split-dir", o.split_dir, "Split directory for linkpred");
  sweep->add_option("--split-seed", o.split_seed, "Seed for the split (default: --seed)");

  auto* project = app.add_subcommand("project", "Poincare disk coordinates and radial region statistics");
  add_graph_options(project, o);
  project->add_option("--embeddings", o.embeddings, "Embedding file")->required()->check(CLI::ExistingFile);
  project->add_option("--axes", o.axes, "Two spatial axes spanning the plane")->delimiter(',');
  project->add_option("--region-types", o.region_types, "Node types to bucket (default: all)")->delimiter(',');
  project->add_option("--boundaries", o.boundaries, "Region boundaries (distance from the origin)")
      ->delimiter(',');
  project->add_option("--degree-type", o.degree_type, "Count only neighbors of this node type");

  auto* generate = app.add_subcommand("generate", "Write a synthetic heterogeneous graph");
  generate->add_option("--kind", o.kind, "block, skewed or bibliographic")->capture_default_str();
  generate->add_option("--out", o.out, "Output directory")->capture_default_str();
  generate->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  generate->add_option("--per-block", o.per_block, "block: nodes per type per block")->capture_default_str();
  generate->add_option("--p-in", o.p_in, "block: edge probability inside a block")->capture_default_str();
  generate->add_option("--p-out", o.p_out, "block: edge probability across blocks")->capture_default_str();
  generate->add_option("--authors", o.authors, "bibliographic: authors")->capture_default_str();
  generate->add_option("--papers", o.papers, "bibliographic: papers")->capture_default_str();
  generate->add_option("--venues", o.venues, "bibliographic: venues")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train) return cmd_train(o, argc, argv);
    if (*recon) return cmd_reconstruct(o, recon_dim->count() > 0, argc, argv);
    if (*link) return cmd_linkpred(o, link_dim->count() > 0, argc, argv);
    if (*sweep) return cmd_sweep(o, sweep_dim->count() > 0, argc, argv);
    if (*project) return cmd_project(o, argc, argv);
    if (*generate) return cmd_generate(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
