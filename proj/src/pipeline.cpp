#include "higgs/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "higgs/bter.hpp"
#include "higgs/datasets.hpp"
#include "higgs/graph_io.hpp"

namespace higgs {

namespace {

constexpr const char* kVersion = "0.1.0";

// Seed-derivation stage tags.
constexpr std::uint64_t kStageTemplate = 1;
constexpr std::uint64_t kStageCommunity = 2;
constexpr std::uint64_t kStageCrossEdges = 3;
constexpr std::uint64_t kStageHierarchy = 10;
constexpr std::uint64_t kStageSamples = 100;
constexpr std::uint64_t kStageBter = 200;
constexpr std::uint64_t kStageNull = 300;
constexpr std::uint64_t kStageEval = 400;

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

void PipelineConfig::validate() const {
  if (backend != "statistical" && backend != "empirical") {
    throw ConfigError("backend must be statistical or empirical");
  }
  if (resolution <= 0.0) throw ConfigError("resolution must be positive");
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (max_h1_size < 2) throw ConfigError("max_h1_size must be >= 2");
  if (size_hint_mode != "hint" && size_hint_mode != "model") {
    throw ConfigError("size_hint_mode must be hint or model");
  }
  if (rewire_fraction < 0.0) throw ConfigError("rewire_fraction must be >= 0");
  if (sample_count < 1) throw ConfigError("sample_count must be >= 1");
  if (mmd_sigma <= 0.0) throw ConfigError("mmd_sigma must be positive");
  if (qq_points < 2) throw ConfigError("qq_points must be >= 2");
}

MetricsConfig PipelineConfig::metrics() const {
  MetricsConfig mc;
  mc.exact_diameter_threshold = exact_diameter_threshold;
  mc.mmd_sigma = mmd_sigma;
  mc.seed = mix64(master_seed, kStageEval);
  return mc;
}

PipelineConfig config_from_string(std::string_view text) {
  PipelineConfig cfg;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) + " has no '='");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "backend") {
        cfg.backend = value;
      } else if (key == "resolution") {
        cfg.resolution = std::stod(value);
      } else if (key == "repeats") {
        cfg.repeats = std::stoull(value);
      } else if (key == "master_seed") {
        cfg.master_seed = std::stoull(value);
      } else if (key == "workers") {
        cfg.workers = std::stoull(value);
      } else if (key == "max_h1_size") {
        cfg.max_h1_size = std::stoull(value);
      } else if (key == "size_hint_mode") {
        cfg.size_hint_mode = value;
      } else if (key == "rewire_fraction") {
        cfg.rewire_fraction = std::stod(value);
      } else if (key == "sample_count") {
        cfg.sample_count = std::stoull(value);
      } else if (key == "mmd_sigma") {
        cfg.mmd_sigma = std::stod(value);
      } else if (key == "qq_points") {
        cfg.qq_points = std::stoull(value);
      } else if (key == "eval_whole") {
        cfg.eval_whole = value == "1" || value == "true";
      } else if (key == "eval_community") {
        cfg.eval_community = value == "1" || value == "true";
      } else if (key == "eval_qq") {
        cfg.eval_qq = value == "1" || value == "true";
      } else if (key == "exact_diameter_threshold") {
        cfg.exact_diameter_threshold = std::stoull(value);
      } else if (key == "out_dir") {
        cfg.out_dir = value;
      } else if (key.starts_with("path.")) {
        cfg.paths[key.substr(5)] = value;
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("config line " + std::to_string(line_number) + ": bad value for '" +
                        key + "'");
    } catch (const std::out_of_range&) {
      throw ConfigError("config line " + std::to_string(line_number) + ": value out of range");
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_string(buffer.str());
}

std::string config_to_string(const PipelineConfig& cfg) {
  std::string out;
  out += "backend=" + cfg.backend + '\n';
  out += "resolution=" + format_double(cfg.resolution) + '\n';
  out += "repeats=" + std::to_string(cfg.repeats) + '\n';
  out += "master_seed=" + std::to_string(cfg.master_seed) + '\n';
  out += "workers=" + std::to_string(cfg.workers) + '\n';
  out += "max_h1_size=" + std::to_string(cfg.max_h1_size) + '\n';
  out += "size_hint_mode=" + cfg.size_hint_mode + '\n';
  out += "rewire_fraction=" + format_double(cfg.rewire_fraction) + '\n';
  out += "sample_count=" + std::to_string(cfg.sample_count) + '\n';
  out += "mmd_sigma=" + format_double(cfg.mmd_sigma) + '\n';
  out += "qq_points=" + std::to_string(cfg.qq_points) + '\n';
  out += "eval_whole=" + std::string(cfg.eval_whole ? "1" : "0") + '\n';
  out += "eval_community=" + std::string(cfg.eval_community ? "1" : "0") + '\n';
  out += "eval_qq=" + std::string(cfg.eval_qq ? "1" : "0") + '\n';
  out += "exact_diameter_threshold=" + std::to_string(cfg.exact_diameter_threshold) + '\n';
  out += "out_dir=" + cfg.out_dir.string() + '\n';
  for (const auto& [key, value] : cfg.paths) {
    out += "path." + key + "=" + value.string() + '\n';
  }
  return out;
}

std::uint64_t config_hash(const PipelineConfig& cfg) { return fnv1a64(config_to_string(cfg)); }

void parallel_for(std::size_t job_count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (job_count == 0) return;
  const std::size_t thread_count = std::min(workers, job_count);
  if (thread_count <= 1) {
    for (std::size_t i = 0; i < job_count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto body = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= job_count) return;
      {
        std::lock_guard lock(error_mutex);
        if (first_error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::pair<AttributedGraph, SampleTrace> sample_graph(const PipelineConfig& cfg,
                                                     const GeneratorBackend& backend,
                                                     std::uint64_t sample_seed) {
  cfg.validate();
  SampleTrace trace;

  auto stage1_start = std::chrono::steady_clock::now();
  trace.h2 = backend.sample_h2(mix64(sample_seed, kStageTemplate, 0));
  trace.stage1_ms = ms_since(stage1_start);
  const AttributedGraph& h2 = trace.h2.graph;

  // Seed disjointness across all jobs of this run.
  {
    std::unordered_set<std::uint64_t> seeds;
    seeds.insert(mix64(sample_seed, kStageTemplate, 0));
    for (std::size_t i = 0; i < h2.node_count(); ++i) {
      seeds.insert(mix64(sample_seed, kStageCommunity, i));
      seeds.insert(mix64(sample_seed, kStageCommunity, i, 1));
    }
    for (std::size_t e = 0; e < h2.edge_count(); ++e) {
      seeds.insert(mix64(sample_seed, kStageCrossEdges, e));
    }
    if (seeds.size() != 1 + 2 * h2.node_count() + h2.edge_count()) {
      throw Error("derived job seeds collided; change the master seed");
    }
  }

  // Stage two: one independent community job per template node.
  auto stage2_start = std::chrono::steady_clock::now();
  std::vector<AttributedGraph> parts(h2.node_count());
  trace.h1_jobs.assign(h2.node_count(), {});
  parallel_for(h2.node_count(), cfg.workers, [&](std::size_t i) {
    auto job_start = std::chrono::steady_clock::now();
    H1JobRecord& record = trace.h1_jobs[i];
    record.condition = h2.node_label(static_cast<NodeId>(i));
    record.seed = mix64(sample_seed, kStageCommunity, i);
    std::size_t hint = cfg.size_hint_mode == "hint"
                           ? std::min(trace.h2.node_size_hints[i], cfg.max_h1_size)
                           : 0;
    record.size_hint = hint;
    AttributedGraph part = backend.sample_h1(record.condition, hint, record.seed);
    if (part.node_count() > cfg.max_h1_size) {
      record.retried = true;
      part = backend.sample_h1(record.condition, cfg.max_h1_size,
                               mix64(sample_seed, kStageCommunity, i, 1));
      if (part.node_count() > cfg.max_h1_size) {
        throw Error("community job " + std::to_string(i) + " exceeded max_h1_size " +
                    std::to_string(cfg.max_h1_size) + " after retry");
      }
    }
    record.size = part.node_count();
    record.duration_ms = ms_since(job_start);
    parts[i] = std::move(part);
  });
  trace.stage2_ms = ms_since(stage2_start);

  // Stage three: one independent masked cross-edge job per template edge.
  auto stage3_start = std::chrono::steady_clock::now();
  trace.cross_jobs.assign(h2.edge_count(), {});
  parallel_for(h2.edge_count(), cfg.workers, [&](std::size_t e) {
    auto job_start = std::chrono::steady_clock::now();
    CrossJobRecord& record = trace.cross_jobs[e];
    const auto& [u, v] = h2.edges()[e];
    record.h2_u = u;
    record.h2_v = v;
    record.seed = mix64(sample_seed, kStageCrossEdges, e);
    record.pair_size = parts[u].node_count() + parts[v].node_count();
    std::optional<LabelId> condition;
    if (h2.has_edge_labels()) condition = h2.edge_labels()[e];
    record.edges = backend.sample_cross_edges(parts[u], parts[v], condition, record.seed);
    validate_cross_edges({parts[u].node_count(), parts[v].node_count()}, record.edges);
    record.duration_ms = ms_since(job_start);
  });
  trace.stage3_ms = ms_since(stage3_start);
  for (const auto& record : trace.cross_jobs) {
    trace.peak_pair_size = std::max(trace.peak_pair_size, record.pair_size);
  }

  auto assembly_start = std::chrono::steady_clock::now();
  std::vector<CrossEdge> cross;
  for (const auto& record : trace.cross_jobs) {
    for (const auto& [lu, rv] : record.edges) {
      cross.push_back({record.h2_u, lu, record.h2_v, rv, std::nullopt});
    }
  }
  UnionResult merged = union_disjoint(parts, cross);
  trace.offsets = merged.offsets;
  trace.duplicate_cross_edges = merged.duplicate_cross_edges;
  trace.assembled_nodes = merged.graph.node_count();

  AttributedGraph result = std::move(merged.graph);
  if (connected_components(result).size() > 1) {
    warn("assembled sample is disconnected; keeping its largest component");
    trace.lcc_trimmed = true;
    result = largest_connected_component(result).graph;
  }
  trace.assembly_ms = ms_since(assembly_start);
  return {std::move(result), std::move(trace)};
}

void check_edge_provenance(const AttributedGraph& assembled, const SampleTrace& trace) {
  if (trace.lcc_trimmed) {
    throw Error("edge provenance is only checkable on untrimmed assemblies");
  }
  const auto& offsets = trace.offsets;
  auto block_of = [&](NodeId v) {
    auto it = std::upper_bound(offsets.begin(), offsets.end(), v);
    return static_cast<std::size_t>(it - offsets.begin()) - 1;
  };
  std::unordered_set<std::uint64_t> recorded;
  for (const auto& record : trace.cross_jobs) {
    for (const auto& [lu, rv] : record.edges) {
      const NodeId a = offsets[record.h2_u] + lu;
      const NodeId b = offsets[record.h2_v] + rv;
      recorded.insert((static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b));
    }
  }
  std::size_t cross = 0;
  for (const auto& [u, v] : assembled.edges()) {
    const std::size_t bu = block_of(u), bv = block_of(v);
    if (bu == bv) continue;
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!recorded.count(key)) {
      throw Error("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                  ") crosses blocks " + std::to_string(bu) + "/" + std::to_string(bv) +
                  " without a recorded stage-three job");
    }
    if (!trace.h2.graph.has_edge(static_cast<NodeId>(bu), static_cast<NodeId>(bv))) {
      throw Error("cross edge between blocks " + std::to_string(bu) + " and " +
                  std::to_string(bv) + " has no template edge");
    }
    ++cross;
  }
  // The recorded set deduplicates colliding jobs, so the assembled cross
  // count must match it exactly.
  if (cross != recorded.size()) {
    throw Error("cross edge tally mismatch: assembled " + std::to_string(cross) +
                ", recorded " + std::to_string(recorded.size()));
  }
}

namespace {

struct StatsRow {
  std::string label;
  double nodes = 0, edges = 0, diameter = 0, clustering = 0, density = 0, transitivity = 0;
  double n_c = 0, c_med = 0;
  bool community_columns = true;
};

// Table cells are for reading; six significant digits, no exponent noise.
std::string cell(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

StatsRow mean_stats(const std::string& label, std::span<const AttributedGraph> graphs,
                    const MetricsConfig& mc, bool community_columns) {
  StatsRow row;
  row.label = label;
  row.community_columns = community_columns;
  for (const auto& g : graphs) {
    const AttributedGraph lcc = largest_connected_component(g).graph;
    const GraphStats stats = graph_stats(lcc, mc);
    row.nodes += static_cast<double>(stats.nodes);
    row.edges += static_cast<double>(stats.edges);
    row.diameter += static_cast<double>(stats.diameter);
    row.clustering += stats.clustering;
    row.density += stats.density;
    row.transitivity += stats.transitivity;
    row.n_c += static_cast<double>(stats.n_c);
    row.c_med += static_cast<double>(stats.c_med);
  }
  const double count = static_cast<double>(graphs.size());
  row.nodes /= count;
  row.edges /= count;
  row.diameter /= count;
  row.clustering /= count;
  row.density /= count;
  row.transitivity /= count;
  row.n_c /= count;
  row.c_med /= count;
  return row;
}

std::string stats_table(std::span<const StatsRow> rows) {
  std::string out = "set\tnodes\tedges\tdiameter\tn_c\tc_med\tclustering\tdensity\ttransitivity\n";
  for (const auto& row : rows) {
    out += row.label + '\t' + cell(row.nodes) + '\t' + cell(row.edges) + '\t' +
           cell(row.diameter) + '\t';
    if (row.community_columns) {
      out += cell(row.n_c) + '\t' + cell(row.c_med) + '\t';
    } else {
      out += "-\t-\t";
    }
    out += cell(row.clustering) + '\t' + cell(row.density) + '\t' +
           cell(row.transitivity) + '\n';
  }
  return out;
}

std::string mmd_table(std::span<const std::pair<std::string, const MmdReport*>> rows) {
  const std::array<std::string, 5> columns = {"nodes", "degree", "clustering", "eccentricity",
                                              "spectral"};
  std::string out = "set";
  for (const auto& c : columns) out += '\t' + c;
  out += '\n';
  for (const auto& [label, report] : rows) {
    out += label;
    for (const auto& c : columns) {
      const auto value = report->score(c);
      out += '\t';
      out += value ? cell(*value) : std::string("-");
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
}

std::vector<double> pooled_degrees(std::span<const AttributedGraph> graphs) {
  std::vector<double> values;
  for (const auto& g : graphs) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      values.push_back(static_cast<double>(g.degree(v)));
    }
  }
  return values;
}

std::vector<double> pooled_clustering(std::span<const AttributedGraph> graphs) {
  std::vector<double> values;
  for (const auto& g : graphs) {
    const auto local = local_clustering(g);
    values.insert(values.end(), local.begin(), local.end());
  }
  return values;
}

std::vector<double> pooled_eccentricities(std::span<const AttributedGraph> graphs,
                                          const MetricsConfig& mc) {
  std::vector<double> values;
  for (const auto& g : graphs) {
    const AttributedGraph lcc = largest_connected_component(g).graph;
    const auto ecc = lcc.node_count() <= mc.exact_eccentricity_threshold
                         ? eccentricities(lcc)
                         : sampled_eccentricities(lcc, mc.eccentricity_samples, mc.seed);
    for (std::size_t e : ecc) values.push_back(static_cast<double>(e));
  }
  return values;
}

std::string qq_for_sets(const std::vector<std::pair<std::string, std::span<const AttributedGraph>>>& sets,
                        const MetricsConfig& mc, std::size_t points) {
  std::vector<QqSeries> series;
  for (const auto& stat : {std::string("Degree"), std::string("Clustering"),
                           std::string("Eccentricity")}) {
    for (const auto& [name, graphs] : sets) {
      QqSeries s;
      s.stat = stat;
      s.series = name;
      if (stat == "Degree") {
        s.values = pooled_degrees(graphs);
      } else if (stat == "Clustering") {
        s.values = pooled_clustering(graphs);
      } else {
        s.values = pooled_eccentricities(graphs, mc);
      }
      series.push_back(std::move(s));
    }
  }
  return qq_csv(series, points);
}

std::vector<AttributedGraph> qualifying_communities(const AttributedGraph& g,
                                                    std::uint64_t seed) {
  const Partition partition = louvain(g, 1.0, seed);
  std::vector<AttributedGraph> out;
  for (const auto& members : community_members(partition)) {
    if (members.size() < 5) continue;
    AttributedGraph community =
        largest_connected_component(induced_subgraph(g, members).graph).graph;
    if (community.node_count() >= 5) out.push_back(std::move(community));
  }
  return out;
}

const std::filesystem::path& required_path(const PipelineConfig& cfg, const std::string& key) {
  auto it = cfg.paths.find(key);
  if (it == cfg.paths.end()) {
    throw ConfigError("experiment requires path." + key + " in the configuration");
  }
  if (!std::filesystem::exists(it->second)) {
    throw DataError("dataset path does not exist: " + it->second.string());
  }
  return it->second;
}

}  // namespace

ExperimentResult run_experiment(const std::string& name, const PipelineConfig& cfg) {
  cfg.validate();
  if (name != "sbm" && name != "cora" && name != "facebook") {
    throw ConfigError("unknown experiment '" + name + "' (expected sbm, cora or facebook)");
  }
  const MetricsConfig mc = cfg.metrics();
  ExperimentResult result;
  result.out_dir = cfg.out_dir;
  std::filesystem::create_directories(cfg.out_dir);

  std::unique_ptr<GeneratorBackend> backend = make_backend(cfg.backend, cfg.rewire_fraction);

  if (name == "sbm") {
    const GraphCorpus corpus = read_corpus(required_path(cfg, "corpus"));
    const CorpusSplits splits = split_corpus(corpus);

    // Conditioning uses a single dummy class: block labels are generation
    // ground truth, not node categories.
    GraphCorpus train = splits.train;
    for (auto& g : train.graphs) g = g.with_uniform_node_labels(0);
    const HierarchicalDataset dataset =
        build_from_corpus(train, cfg.resolution, mix64(cfg.master_seed, kStageHierarchy));
    backend->fit(dataset);

    std::vector<AttributedGraph> samples(cfg.sample_count);
    for (std::size_t s = 0; s < cfg.sample_count; ++s) {
      samples[s] =
          sample_graph(cfg, *backend, mix64(cfg.master_seed, kStageSamples, s)).first;
    }
    std::vector<AttributedGraph> bter_samples(splits.test.graphs.size());
    parallel_for(splits.test.graphs.size(), cfg.workers, [&](std::size_t i) {
      const BterParams params = fit_bter(splits.test.graphs[i]);
      bter_samples[i] =
          sample_bter(params, mix64(cfg.master_seed, kStageBter, i)).graph;
    });
    // Null baseline: one pooled density over the test split, sizes matched.
    // (A per-graph edge-count clone would be a per-instance null, not a
    // generative baseline.)
    double pooled_density = 0.0;
    for (const auto& g : splits.test.graphs) pooled_density += g.density();
    pooled_density /= static_cast<double>(splits.test.graphs.size());
    std::vector<AttributedGraph> er_samples(splits.test.graphs.size());
    for (std::size_t i = 0; i < splits.test.graphs.size(); ++i) {
      const std::size_t n = splits.test.graphs[i].node_count();
      const auto m = static_cast<std::size_t>(
          std::llround(pooled_density * static_cast<double>(n * (n - 1) / 2)));
      er_samples[i] = erdos_renyi_gnm(n, m, mix64(cfg.master_seed, kStageNull, i));
    }

    std::vector<StatsRow> rows;
    rows.push_back(mean_stats("sbm", splits.test.graphs, mc, false));
    rows.push_back(mean_stats("higgs", samples, mc, false));
    rows.push_back(mean_stats("bter", bter_samples, mc, false));
    rows.push_back(mean_stats("er", er_samples, mc, false));
    write_text(cfg.out_dir / "stats.tsv", stats_table(rows));
    for (const auto& row : rows) result.stats_rows.push_back(row.label);

    auto lcc_all = [](std::span<const AttributedGraph> graphs) {
      std::vector<AttributedGraph> out;
      out.reserve(graphs.size());
      for (const auto& g : graphs) out.push_back(largest_connected_component(g).graph);
      return out;
    };
    const auto real_lcc = lcc_all(splits.test.graphs);
    const auto higgs_lcc = lcc_all(samples);
    const auto bter_lcc = lcc_all(bter_samples);
    const auto er_lcc = lcc_all(er_samples);
    result.whole_mmd_higgs = corpus_mmd(real_lcc, higgs_lcc, mc);
    result.whole_mmd_bter = corpus_mmd(real_lcc, bter_lcc, mc);
    result.whole_mmd_er = corpus_mmd(real_lcc, er_lcc, mc);
    std::vector<std::pair<std::string, const MmdReport*>> mmd_rows = {
        {"higgs", &result.whole_mmd_higgs},
        {"bter", &result.whole_mmd_bter},
        {"er", &*result.whole_mmd_er}};
    write_text(cfg.out_dir / "mmd.tsv", mmd_table(mmd_rows));

    if (cfg.eval_qq) {
      write_text(cfg.out_dir / "qq.csv",
                 qq_for_sets({{"real", real_lcc}, {"higgs", higgs_lcc}, {"bter", bter_lcc}}, mc,
                             cfg.qq_points));
    }
    result.generated = std::move(samples);
  } else {
    AttributedGraph real;
    if (name == "cora") {
      real = ingest_cora(required_path(cfg, "cora_content"), required_path(cfg, "cora_cites"))
                 .graph;
    } else {
      real = largest_connected_component(
                 ingest_facebook(required_path(cfg, "facebook_edges"),
                                 required_path(cfg, "facebook_targets"))
                     .graph)
                 .graph;
    }

    const HierarchicalDataset dataset = build_from_large_graph(
        real, cfg.resolution, cfg.repeats, mix64(cfg.master_seed, kStageHierarchy));
    backend->fit(dataset);

    auto [sampled, trace] =
        sample_graph(cfg, *backend, mix64(cfg.master_seed, kStageSamples, 0));
    const BterParams bter_params = fit_bter(real);
    const AttributedGraph bter_sampled =
        largest_connected_component(sample_bter(bter_params, mix64(cfg.master_seed, kStageBter, 0))
                                        .graph)
            .graph;

    std::vector<StatsRow> rows;
    rows.push_back(mean_stats(name, std::span(&real, 1), mc, true));
    rows.push_back(mean_stats("higgs", std::span(&sampled, 1), mc, true));
    rows.push_back(mean_stats("bter", std::span(&bter_sampled, 1), mc, true));
    write_text(cfg.out_dir / "stats.tsv", stats_table(rows));
    for (const auto& row : rows) result.stats_rows.push_back(row.label);

    if (cfg.eval_whole) {
      result.whole_mmd_higgs = corpus_mmd(std::span(&real, 1), std::span(&sampled, 1), mc);
      result.whole_mmd_bter = corpus_mmd(std::span(&real, 1), std::span(&bter_sampled, 1), mc);
      std::vector<std::pair<std::string, const MmdReport*>> mmd_rows = {
          {"higgs", &result.whole_mmd_higgs}, {"bter", &result.whole_mmd_bter}};
      write_text(cfg.out_dir / "mmd.tsv", mmd_table(mmd_rows));
    }
    if (cfg.eval_community) {
      const std::uint64_t eval_seed = mix64(cfg.master_seed, kStageEval, 1);
      result.community_higgs = community_eval(real, sampled, eval_seed, mc);
      result.community_bter = community_eval(real, bter_sampled, eval_seed, mc);
      std::vector<std::pair<std::string, const MmdReport*>> mmd_rows = {
          {"higgs", &*result.community_higgs}, {"bter", &*result.community_bter}};
      write_text(cfg.out_dir / "mmd_communities.tsv", mmd_table(mmd_rows));
    }
    if (cfg.eval_qq) {
      write_text(cfg.out_dir / "qq.csv",
                 qq_for_sets({{"real", std::span(&real, 1)},
                              {"higgs", std::span(&sampled, 1)},
                              {"bter", std::span(&bter_sampled, 1)}},
                             mc, cfg.qq_points));
      const std::uint64_t eval_seed = mix64(cfg.master_seed, kStageEval, 1);
      const auto real_comm = qualifying_communities(real, eval_seed);
      const auto higgs_comm = qualifying_communities(sampled, eval_seed);
      const auto bter_comm = qualifying_communities(bter_sampled, eval_seed);
      write_text(cfg.out_dir / "qq_communities.csv",
                 qq_for_sets({{"real", real_comm}, {"higgs", higgs_comm}, {"bter", bter_comm}},
                             mc, cfg.qq_points));
    }
    result.generated.push_back(std::move(sampled));
  }

  write_manifest(cfg, cfg.out_dir, "experiment " + name);
  return result;
}

ClassConditionedModel synthetic_scaling_model(std::size_t size_cap) {
  if (size_cap < 1) throw ConfigError("scaling probe needs size_cap >= 1");
  ClassConditionedModel model;
  ClassStats stats;
  const std::size_t size_lo = std::max<std::size_t>(1, (size_cap * 3) / 5);
  for (std::size_t s = size_lo; s <= size_cap; ++s) stats.sizes.push_back(s);
  stats.label_counts[0] = 1;
  stats.degree_counts[2] = 1;
  stats.degree_counts[3] = 1;
  model.classes[0] = std::move(stats);

  const double mean_size = 0.8 * static_cast<double>(size_cap);
  PairDensityStats density;
  density.mean = std::min(1.0, 4.0 / (mean_size * mean_size));
  density.variance = 0.0;
  density.count = 1;
  model.pair_density[{0, 0}] = density;

  model.h2.node_counts.push_back(size_cap);
  model.h2.class_counts[0] = 1;
  const double connect_p =
      size_cap <= 2 ? 1.0
                    : std::min(1.0, 4.0 * std::log(static_cast<double>(size_cap)) /
                                        static_cast<double>(size_cap));
  model.h2.pair_adjacency[{0, 0}] = {static_cast<std::size_t>(connect_p * 1000000.0), 1000000};
  model.vocab[0] = "synthetic";
  return model;
}

ScalingReport scaling_probe(std::size_t size_cap, const PipelineConfig& cfg) {
  StatisticalBackend backend(synthetic_scaling_model(size_cap));
  PipelineConfig probe_cfg = cfg;
  probe_cfg.max_h1_size = std::max<std::size_t>(2, size_cap);
  probe_cfg.validate();

  auto [graph, trace] =
      sample_graph(probe_cfg, backend, mix64(cfg.master_seed, 0xdeadULL));
  ScalingReport report;
  report.size_cap = size_cap;
  report.h2_nodes = trace.h2.graph.node_count();
  report.h2_edges = trace.h2.graph.edge_count();
  report.output_nodes = graph.node_count();
  report.output_edges = graph.edge_count();
  for (const auto& job : trace.h1_jobs) report.max_h1_size = std::max(report.max_h1_size, job.size);
  report.peak_pair_size = trace.peak_pair_size;
  report.stage1_ms = trace.stage1_ms;
  report.stage2_ms = trace.stage2_ms;
  report.stage3_ms = trace.stage3_ms;
  report.assembly_ms = trace.assembly_ms;
  return report;
}

void write_manifest(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                    const std::string& command) {
  std::string manifest;
  manifest += "tool=higgs " + std::string(kVersion) + '\n';
  manifest += "command=" + command + '\n';
  manifest += "config_hash=" + std::to_string(config_hash(cfg)) + '\n';
  manifest += config_to_string(cfg);
  write_text(out_dir / "manifest.txt", manifest);
}

}  // namespace higgs
