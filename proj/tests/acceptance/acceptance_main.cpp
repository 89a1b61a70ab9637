// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Heavier end-to-end runs live here rather than in the unit suite.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "higgs/backend.hpp"
#include "higgs/bter.hpp"
#include "higgs/datasets.hpp"
#include "higgs/graph_io.hpp"
#include "higgs/metrics.hpp"
#include "higgs/pipeline.hpp"

using namespace higgs;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string description;
  std::function<void(std::ostream&)> run;
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& what) {
  if (!condition) throw Failure(what);
}

void require_between(double value, double lo, double hi, const std::string& what) {
  std::ostringstream message;
  message << what << " = " << value << " outside [" << lo << ", " << hi << "]";
  require(value >= lo && value <= hi, message.str());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "higgs_acceptance";
  fs::create_directories(dir);
  return dir;
}

// The benchmark corpus behind the pipeline criteria. The published aggregate
// statistics of the benchmark test set (about 107 nodes, 522 edges, density
// 0.099) correspond to an inter-community probability of 0.005, which is
// what the experiment harness uses; the generator's own default stays at the
// separately stated 0.05 and is exercised by criterion 1.
SbmSpec benchmark_spec() {
  SbmSpec spec;
  spec.p_inter = 0.005;
  spec.seed = 2023;
  return spec;
}

struct SharedState {
  fs::path corpus_path;
  std::optional<ExperimentResult> sbm_result;
  double sbm_pipeline_seconds = 0.0;
  std::vector<AttributedGraph> test_graphs;

  const fs::path& benchmark_corpus() {
    if (corpus_path.empty()) {
      corpus_path = work_dir() / "sbm_benchmark.txt";
      write_corpus(generate_sbm_corpus(benchmark_spec()), corpus_path);
      test_graphs = split_corpus(read_corpus(corpus_path)).test.graphs;
    }
    return corpus_path;
  }

  const ExperimentResult& sbm_experiment() {
    if (!sbm_result.has_value()) {
      PipelineConfig cfg;
      cfg.backend = "statistical";
      // Resolution 1 recovers the planted benchmark communities; higher
      // resolutions fragment them, which the pooled single-class density of
      // the statistical backend cannot represent.
      cfg.resolution = 1.0;
      cfg.master_seed = 7;
      cfg.workers = 1;  // the runtime bound is stated single-threaded
      cfg.sample_count = 40;
      cfg.max_h1_size = 300;
      cfg.out_dir = work_dir() / "sbm_out";
      cfg.paths["corpus"] = benchmark_corpus();
      const auto start = std::chrono::steady_clock::now();
      sbm_result = run_experiment("sbm", cfg);
      sbm_pipeline_seconds = seconds_since(start);
    }
    return *sbm_result;
  }
};

SharedState shared;

double mean_density(std::span<const AttributedGraph> graphs) {
  double sum = 0.0;
  for (const auto& g : graphs) sum += largest_connected_component(g).graph.density();
  return sum / static_cast<double>(graphs.size());
}

double mean_clustering(std::span<const AttributedGraph> graphs) {
  double sum = 0.0;
  for (const auto& g : graphs) {
    const AttributedGraph lcc = largest_connected_component(g).graph;
    const auto local = local_clustering(lcc);
    sum += std::accumulate(local.begin(), local.end(), 0.0) /
           static_cast<double>(lcc.node_count());
  }
  return sum / static_cast<double>(graphs.size());
}

// ---------------------------------------------------------------- criteria

void criterion_sbm_generator(std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const SbmSpec spec{};  // stated defaults: p_intra 0.3, p_inter 0.05
  const GraphCorpus corpus = generate_sbm_corpus(spec);
  require(corpus.graphs.size() == 200, "expected 200 graphs");

  double intra_edges = 0, intra_pairs = 0, inter_edges = 0, inter_pairs = 0;
  for (const auto& g : corpus.graphs) {
    require(g.node_count() >= 40 && g.node_count() <= 200,
            "graph size " + std::to_string(g.node_count()) + " outside [40, 200]");
    LabelId blocks = 0;
    for (LabelId l : g.node_labels()) blocks = std::max(blocks, l);
    require(blocks + 1 >= 2 && blocks + 1 <= 5, "block count outside [2, 5]");
    std::vector<std::size_t> block_pairs(blocks + 1, 0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        (g.node_label(u) == g.node_label(v) ? intra_pairs : inter_pairs) += 1.0;
      }
    }
    for (const auto& [u, v] : g.edges()) {
      (g.node_label(u) == g.node_label(v) ? intra_edges : inter_edges) += 1.0;
    }
  }
  const double intra = intra_edges / intra_pairs;
  const double inter = inter_edges / inter_pairs;
  require_between(intra, 0.29, 0.31, "pooled intra-block density");
  require_between(inter, 0.045, 0.055, "pooled inter-block density");
  const double elapsed = seconds_since(start);
  require(elapsed < 10.0, "generation took " + std::to_string(elapsed) + " s (budget 10)");
  log << "intra " << intra << ", inter " << inter << ", " << elapsed << " s";
}

void criterion_sbm_pipeline(std::ostream& log) {
  const ExperimentResult& result = shared.sbm_experiment();
  const double density = mean_density(result.generated);
  const double clustering = mean_clustering(result.generated);
  double mean_nodes = 0.0;
  for (const auto& g : result.generated) mean_nodes += static_cast<double>(g.node_count());
  mean_nodes /= static_cast<double>(result.generated.size());
  require_between(density, 0.085, 0.110, "mean sampled density");
  require_between(clustering, 0.20, 0.40, "mean sampled clustering");
  require_between(mean_nodes, 90.0, 140.0, "mean sampled node count");
  require(shared.sbm_pipeline_seconds < 120.0,
          "sbm experiment took " + std::to_string(shared.sbm_pipeline_seconds) + " s");
  log << "density " << density << ", clustering " << clustering << ", mean nodes "
      << mean_nodes << ", " << shared.sbm_pipeline_seconds << " s (whole experiment)";
}

void criterion_bter_sbm(std::ostream& log) {
  shared.benchmark_corpus();
  const auto start = std::chrono::steady_clock::now();
  std::vector<AttributedGraph> samples;
  for (std::size_t i = 0; i < shared.test_graphs.size(); ++i) {
    const BterParams params = fit_bter(shared.test_graphs[i]);
    samples.push_back(sample_bter(params, mix64(99, i)).graph);
  }
  const double elapsed = seconds_since(start);
  const double clustering = mean_clustering(samples);
  const double density = mean_density(samples);
  log << "clustering " << clustering << ", density " << density << ", " << elapsed << " s";
  std::string problems;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) problems += (problems.empty() ? "" : "; ") + what;
  };
  check(clustering >= 0.14 - 0.08 && clustering <= 0.14 + 0.08,
        "mean bter clustering " + std::to_string(clustering) + " outside 0.14 +- 0.08");
  check(density >= 0.0873 - 0.015 && density <= 0.0873 + 0.015,
        "mean bter density " + std::to_string(density) + " outside 0.0873 +- 0.015");
  check(elapsed < 30.0, "40 bter fits+samples took " + std::to_string(elapsed) + " s");
  require(problems.empty(), problems + " (clustering " + std::to_string(clustering) +
                                ", density " + std::to_string(density) + ")");
}

void criterion_mmd_ordering(std::ostream& log) {
  const ExperimentResult& result = shared.sbm_experiment();
  require(result.whole_mmd_er.has_value(), "er baseline missing");
  const double higgs_degree = *result.whole_mmd_higgs.score("degree");
  const double er_degree = *result.whole_mmd_er->score("degree");
  require(higgs_degree < er_degree,
          "degree MMD ordering violated: higgs " + std::to_string(higgs_degree) + " vs er " +
              std::to_string(er_degree));
  log << "higgs " << higgs_degree << " < er " << er_degree;
}

void criterion_ingestion_goldens(std::ostream& log) {
  const auto fb = fixtures::facebook_files(work_dir() / "facebook");
  const IngestReport fb_report = ingest_facebook(fb.edges, fb.targets);
  require(fb_report.graph.node_count() == 22470,
          "facebook nodes " + std::to_string(fb_report.graph.node_count()));
  require(fb_report.graph.edge_count() == 171002,
          "facebook edges " + std::to_string(fb_report.graph.edge_count()));
  const double fb_density = fb_report.graph.density();
  require_between(fb_density, 0.000677 * 0.99, 0.000677 * 1.01, "facebook density");

  const auto cora = fixtures::cora_files(work_dir() / "cora");
  const IngestReport cora_report = ingest_cora(cora.content, cora.cites);
  const double cora_density = cora_report.graph.density();
  require_between(cora_density, 0.00202 * 0.9, 0.00202 * 1.1, "cora lcc density");
  require_between(static_cast<double>(cora_report.graph.edge_count()), 7981.0 * 0.95,
                  7981.0 * 1.05, "cora lcc edge count");
  const PartitionStats cora_parts =
      partition_stats(louvain(cora_report.graph, 1.0, 1));
  require_between(static_cast<double>(cora_parts.community_count), 10.0, 40.0,
                  "cora community count at resolution 1");
  log << "facebook " << fb_report.graph.node_count() << "/" << fb_report.graph.edge_count()
      << " density " << fb_density << (fb.synthetic ? " (synthetic fixture)" : " (real data)")
      << "; cora lcc " << cora_report.graph.node_count() << "/"
      << cora_report.graph.edge_count() << " density " << cora_density << ", N_C "
      << cora_parts.community_count
      << (cora.synthetic ? " (synthetic fixture)" : " (real data)");
}

void criterion_facebook_run(std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const auto fb = fixtures::facebook_files(work_dir() / "facebook");

  PipelineConfig cfg;
  cfg.backend = "statistical";
  cfg.resolution = 10.0;
  cfg.repeats = 2;
  cfg.master_seed = 17;
  cfg.workers = 8;
  cfg.max_h1_size = 1500;
  cfg.sample_count = 1;
  cfg.out_dir = work_dir() / "facebook_out";
  cfg.paths["facebook_edges"] = fb.edges;
  cfg.paths["facebook_targets"] = fb.targets;
  const ExperimentResult result = run_experiment("facebook", cfg);

  require(result.generated.size() == 1, "expected one large sample");
  const double nodes = static_cast<double>(result.generated[0].node_count());
  require_between(nodes, 22470.0 * 0.85, 22470.0 * 1.15, "sampled node count");

  require(result.community_higgs.has_value(), "community evaluation missing");
  require(result.community_higgs->scores.size() == 5, "expected five community statistics");
  for (const auto& [name, value] : result.community_higgs->scores) {
    require(std::isfinite(value), "community MMD " + name + " not finite");
  }

  const ScalingReport probe = scaling_probe(50, cfg);
  require(probe.peak_pair_size <= 2 * probe.max_h1_size,
          "stage-three peak pair size exceeded twice the largest community");

  // Higher resolution must produce more communities on the ingested graph.
  const AttributedGraph ingested =
      largest_connected_component(ingest_facebook(fb.edges, fb.targets).graph).graph;
  double n_c_low = 0.0, n_c_high = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    n_c_low += static_cast<double>(partition_stats(louvain(ingested, 1.0, seed)).community_count);
    n_c_high +=
        static_cast<double>(partition_stats(louvain(ingested, 10.0, seed)).community_count);
  }
  require(n_c_high > n_c_low, "community count did not grow with resolution (" +
                                  std::to_string(n_c_low / 3) + " vs " +
                                  std::to_string(n_c_high / 3) + ")");

  const double elapsed = seconds_since(start);
  require(elapsed < 1800.0, "facebook run took " + std::to_string(elapsed) + " s");
  log << "sampled " << result.generated[0].node_count() << " nodes / "
      << result.generated[0].edge_count() << " edges in " << elapsed << " s; peak pair "
      << probe.peak_pair_size << " <= " << 2 * probe.max_h1_size << "; mean N_C "
      << n_c_low / 3 << " -> " << n_c_high / 3 << " at resolution 1 -> 10";
}

void criterion_quadratic_extension(std::ostream& log) {
  PipelineConfig cfg;
  cfg.workers = 8;
  cfg.master_seed = 23;

  const ScalingReport small = scaling_probe(50, cfg);
  require(small.output_nodes >= 1500,
          "size cap 50 produced only " + std::to_string(small.output_nodes) + " nodes");
  require(small.peak_pair_size <= 2 * small.max_h1_size, "peak pair size bound violated");

  const ScalingReport large = scaling_probe(150, cfg);
  require(large.output_nodes >= 15000,
          "size cap 150 produced only " + std::to_string(large.output_nodes) + " nodes");
  require(large.peak_pair_size <= 2 * large.max_h1_size, "peak pair size bound violated");
  log << "cap 50 -> " << small.output_nodes << " nodes, cap 150 -> " << large.output_nodes
      << " nodes";
}

void criterion_reconstruction(std::ostream& log) {
  SbmSpec spec;
  spec.graph_count = 100;
  spec.p_inter = 0.01;
  spec.seed = 404;
  const GraphCorpus corpus = generate_sbm_corpus(spec);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < corpus.graphs.size(); ++i) {
    const AttributedGraph lcc = largest_connected_component(corpus.graphs[i]).graph;
    const auto dataset = build_from_large_graph(corpus.graphs[i], 1.0, 1, mix64(9, i));
    const IndexedSubgraph rebuilt = reassemble_repeat(dataset, 0);
    require(rebuilt.graph.node_count() == lcc.node_count(), "node count mismatch");
    require(rebuilt.graph.edge_count() == lcc.edge_count(), "edge count mismatch");
    std::set<NodePair> mapped;
    for (const auto& [u, v] : rebuilt.graph.edges()) {
      const NodeId a = rebuilt.source_nodes[u], b = rebuilt.source_nodes[v];
      mapped.insert({std::min(a, b), std::max(a, b)});
    }
    const auto& expected = lcc.edges();
    require(mapped == std::set<NodePair>(expected.begin(), expected.end()),
            "edge set mismatch after reassembly");
    ++checked;
  }
  log << checked << " graphs reassembled edge-for-edge";
}

void criterion_mask_safety(std::ostream& log) {
  // 1e5 sampled cross edges, all inside the free region.
  SbmSpec spec;
  spec.graph_count = 30;
  spec.p_inter = 0.05;
  spec.seed = 5150;
  GraphCorpus corpus = generate_sbm_corpus(spec);
  for (auto& g : corpus.graphs) g = g.with_uniform_node_labels(0);
  const auto dataset = build_from_corpus(corpus, 1.0, 6);
  const ClassConditionedModel model = fit_statistical(dataset);

  Rng rng(31337);
  std::size_t sampled = 0;
  std::uint64_t job = 0;
  while (sampled < 100000) {
    const auto& left = dataset.h1_samples[rng.below(dataset.h1_samples.size())].graph;
    const auto& right = dataset.h1_samples[rng.below(dataset.h1_samples.size())].graph;
    if (left.node_count() == 0 || right.node_count() == 0) continue;
    const auto edges =
        sample_cross_edges_masked(model, left, right, std::nullopt, mix64(8, job++));
    validate_cross_edges({left.node_count(), right.node_count()}, edges);
    sampled += edges.size();
  }

  // End-to-end provenance accounting on assembled samples.
  StatisticalBackend backend(model);
  PipelineConfig cfg;
  cfg.workers = 4;
  cfg.max_h1_size = 300;
  std::size_t accounted = 0;
  for (int t = 0; t < 10; ++t) {
    const auto [graph, trace] = sample_graph(cfg, backend, mix64(77, t));
    if (trace.lcc_trimmed) continue;
    check_edge_provenance(graph, trace);
    ++accounted;
  }
  require(accounted > 0, "no untrimmed assembly available for provenance accounting");
  log << sampled << " cross edges, zero violations; " << accounted
      << " assemblies accounted edge-for-edge";
}

void criterion_louvain(std::ostream& log) {
  Rng rng(606);
  std::size_t monotone_checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 5 + rng.below(46);
    const double p = 0.05 + rng.uniform() * 0.45;
    std::vector<NodePair> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (rng.uniform() < p) edges.emplace_back(u, v);
      }
    }
    AttributedGraph g(n, std::move(edges));
    if (g.edge_count() == 0) continue;
    const double gamma = trial % 3 == 0 ? 0.5 : (trial % 3 == 1 ? 1.0 : 2.0);
    const Partition partition = louvain(g, gamma, rng.next());
    for (std::size_t i = 1; i < partition.pass_modularity.size(); ++i) {
      require(partition.pass_modularity[i] >= partition.pass_modularity[i - 1] - 1e-12,
              "pass modularity decreased");
    }
    ++monotone_checked;
  }

  // determinism
  AttributedGraph g(30, [] {
    std::vector<NodePair> edges;
    Rng r(12);
    for (NodeId u = 0; u < 30; ++u) {
      for (NodeId v = u + 1; v < 30; ++v) {
        if (r.uniform() < 0.2) edges.emplace_back(u, v);
      }
    }
    return edges;
  }());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    require(louvain(g, 1.0, seed).assignment == louvain(g, 1.0, seed).assignment,
            "louvain not deterministic under seed");
  }

  // exhaustive-optimum protocol on graphs of <= 8 nodes
  auto rgs_max_modularity = [](const AttributedGraph& graph) {
    std::vector<NodeId> a(graph.node_count(), 0);
    double best = -2.0;
    while (true) {
      best = std::max(best, modularity(graph, a, 1.0));
      std::size_t i = graph.node_count();
      bool advanced = false;
      while (i-- > 1) {
        NodeId max_prefix = 0;
        for (std::size_t j = 0; j < i; ++j) max_prefix = std::max(max_prefix, a[j]);
        if (a[i] <= max_prefix) {
          ++a[i];
          for (std::size_t j = i + 1; j < graph.node_count(); ++j) a[j] = 0;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
    return best;
  };
  int total = 0, matched = 0;
  Rng orng(909);
  while (total < 100) {
    const std::size_t n = 3 + orng.below(6);
    std::vector<NodePair> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (orng.uniform() < 0.35) edges.emplace_back(u, v);
      }
    }
    AttributedGraph small(n, std::move(edges));
    if (small.edge_count() == 0) continue;
    ++total;
    const Partition p = louvain(small, 1.0, mix64(33, total));
    const double best = rgs_max_modularity(small);
    require(p.modularity <= best + 1e-9, "louvain exceeded the exhaustive optimum");
    if (p.modularity >= best - 1e-9) ++matched;
  }
  require(matched >= 95, "optimum matched on only " + std::to_string(matched) + "/100");
  log << monotone_checked << " monotone runs, optimum matched " << matched << "/100";
}

void criterion_metric_oracles(std::ostream& log) {
  // triangle + pendant
  AttributedGraph pendant(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}});
  const GraphStats stats = graph_stats(pendant);
  require(std::abs(stats.clustering - 7.0 / 12.0) < 1e-12, "pendant clustering");
  require(std::abs(stats.transitivity - 3.0 / 5.0) < 1e-12, "pendant transitivity");
  require(stats.diameter == 2, "pendant diameter");

  // P3 eccentricities
  AttributedGraph p3(3, {{0, 1}, {1, 2}});
  const Histogram ecc = eccentricity_hist(p3);
  require(std::abs(ecc.mass[1] - 1.0 / 3.0) < 1e-12 && std::abs(ecc.mass[2] - 2.0 / 3.0) < 1e-12,
          "P3 eccentricity histogram");

  // K_n spectrum closed form: eigenvalue 0 once, n/(n-1) with multiplicity
  // n-1. Solver output can land a hair either side of a bin boundary, so the
  // bulk mass is collected over a one-bin window.
  for (std::size_t n : {3u, 6u}) {
    std::vector<NodePair> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    }
    const Histogram h = spectral_hist(AttributedGraph(n, std::move(edges)));
    const double expected = static_cast<double>(n) / static_cast<double>(n - 1);
    const std::size_t bin =
        std::min<std::size_t>(static_cast<std::size_t>(expected / 2.0 * 200.0), 199);
    require(std::abs(h.mass[0] - 1.0 / n) < 1e-12, "K_n zero eigenvalue mass");
    double bulk = h.mass[bin];
    if (bin > 0) bulk += h.mass[bin - 1];
    if (bin + 1 < h.bins) bulk += h.mass[bin + 1];
    require(std::abs(bulk - double(n - 1) / n) < 1e-12, "K_n bulk eigenvalue mass");
  }

  // MMD axioms and the closed-form kernel case
  Histogram left, right;
  left.kind = right.kind = Histogram::Kind::degree;
  left.lo = right.lo = 0.0;
  left.hi = right.hi = 2.0;
  left.bins = right.bins = 2;
  left.mass = {1.0, 0.0};
  right.mass = {0.0, 1.0};
  const std::vector<Histogram> a{left}, b{right};
  require(mmd(a, a, 1.0) < 1e-9, "MMD(X, X) != 0");
  require(std::abs(mmd(a, b, 1.0) - mmd(b, a, 1.0)) < 1e-9, "MMD not symmetric");
  require(std::abs(mmd(a, b, 1.0) - (2.0 - 2.0 * std::exp(-0.5))) < 1e-9,
          "closed-form kernel case");
  log << "fixtures, axioms and closed forms all hold";
}

void criterion_schedule_independence(std::ostream& log) {
  SbmSpec spec;
  spec.graph_count = 24;
  spec.p_inter = 0.05;
  spec.seed = 71;
  GraphCorpus corpus = generate_sbm_corpus(spec);
  for (auto& g : corpus.graphs) g = g.with_uniform_node_labels(0);
  StatisticalBackend backend;
  backend.fit(build_from_corpus(corpus, 2.0, 3));

  for (std::uint64_t seed : {101ULL, 202ULL, 303ULL}) {
    std::set<std::string> outputs;
    for (std::size_t workers : {1u, 4u, 16u}) {
      PipelineConfig cfg;
      cfg.workers = workers;
      cfg.max_h1_size = 300;
      outputs.insert(graph_to_string(sample_graph(cfg, backend, seed).first));
    }
    require(outputs.size() == 1, "outputs differ across worker counts");
  }
  log << "byte-identical across workers {1,4,16} for 3 seeds";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "SBM benchmark regeneration at the stated parameters", criterion_sbm_generator},
      {2, "SBM pipeline density/clustering bands", criterion_sbm_pipeline},
      {3, "BTER on the SBM test set", criterion_bter_sbm},
      {4, "comparative degree-MMD ordering vs the ER baseline", criterion_mmd_ordering},
      {5, "ingestion golden values", criterion_ingestion_goldens},
      {6, "large-graph Facebook experiment", criterion_facebook_run},
      {7, "quadratic-extension property", criterion_quadratic_extension},
      {8, "reconstruction invariant on 100 SBM graphs", criterion_reconstruction},
      {9, "mask safety and edge provenance", criterion_mask_safety},
      {10, "louvain monotonicity, determinism, exhaustive optimum", criterion_louvain},
      {11, "metric oracles and MMD axioms", criterion_metric_oracles},
      {12, "schedule independence", criterion_schedule_independence},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::ostringstream log;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(log);
      std::cout << "[PASS] criterion " << criterion.id << ": " << criterion.description;
      if (!log.str().empty()) std::cout << " — " << log.str();
      std::cout << " (" << seconds_since(start) << " s)\n" << std::flush;
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "[FAIL] criterion " << criterion.id << ": " << criterion.description
                << " — " << e.what() << " (" << seconds_since(start) << " s)\n"
                << std::flush;
    }
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " criteria passed\n";
  return 0;
}
