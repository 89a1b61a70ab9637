#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <set>

#include "higgs/datasets.hpp"
#include "higgs/graph_io.hpp"
#include "higgs/pipeline.hpp"
#include "oracles.hpp"

using namespace higgs;

namespace {

HierarchicalDataset toy_dataset() {
  AttributedGraph source(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}},
                         std::vector<LabelId>(6, 0));
  return build_from_large_graph(source, 1.0, 4, 21);
}

PipelineConfig toy_config() {
  PipelineConfig cfg;
  cfg.resolution = 1.0;
  cfg.repeats = 2;
  cfg.master_seed = 5;
  cfg.workers = 2;
  cfg.max_h1_size = 50;
  return cfg;
}

}  // namespace

TEST_CASE("config file parsing and validation") {
  const std::string text =
      "backend=statistical\n"
      "resolution=2.5\n"
      "# comment\n"
      "workers=4\n"
      "path.corpus=/tmp/c.txt\n";
  const PipelineConfig cfg = config_from_string(text);
  CHECK(cfg.resolution == 2.5);
  CHECK(cfg.workers == 4);
  CHECK(cfg.paths.at("corpus") == "/tmp/c.txt");

  CHECK_THROWS_AS(config_from_string("banana=1\n"), ConfigError);
  CHECK_THROWS_AS(config_from_string("workers=0\n"), ConfigError);
  CHECK_THROWS_AS(config_from_string("resolution=-1\n"), ConfigError);
  CHECK_THROWS_AS(config_from_string("backend=neural\n"), ConfigError);

  // canonical dump re-parses to the same hash
  const PipelineConfig back = config_from_string(config_to_string(cfg));
  CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("parallel_for covers every job once and propagates errors") {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(257, 8, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) CHECK(h.load() == 1);

  CHECK_THROWS_AS(
      parallel_for(100, 4,
                   [&](std::size_t i) {
                     if (i == 57) throw DataError("boom");
                   }),
      DataError);
}

TEST_CASE("sample_graph on the toy dataset produces bridged communities") {
  const auto dataset = toy_dataset();
  StatisticalBackend backend;
  backend.fit(dataset);
  const PipelineConfig cfg = toy_config();

  const auto [graph, trace] = sample_graph(cfg, backend, 77);
  // point-mass fits force two size-3 communities joined by >= 1 cross edge;
  // the community interiors themselves are resampled (Chung-Lu), not copied
  CHECK(trace.h2.graph.node_count() == 2);
  CHECK(trace.h1_jobs.size() == 2);
  CHECK(trace.cross_jobs.size() == trace.h2.graph.edge_count());
  CHECK(trace.assembled_nodes == 6);
  REQUIRE(trace.cross_jobs.size() == 1);
  CHECK(trace.cross_jobs[0].edges.size() >= 1);
  CHECK(trace.peak_pair_size == 6);
}

TEST_CASE("degenerate one-node template skips stage three") {
  AttributedGraph triangle(3, {{0, 1}, {1, 2}, {0, 2}}, std::vector<LabelId>(3, 0));
  GraphCorpus corpus;
  corpus.graphs.assign(3, triangle);
  const auto dataset = build_from_corpus(corpus, 1.0, 2);
  StatisticalBackend backend;
  backend.fit(dataset);
  const auto [graph, trace] = sample_graph(toy_config(), backend, 3);
  CHECK(trace.h2.graph.node_count() == 1);
  CHECK(trace.cross_jobs.empty());
  CHECK(trace.assembled_nodes == 3);
  CHECK(graph.node_count() <= 3);  // LCC of one resampled community
}

TEST_CASE("empirical backend samples end to end") {
  const auto dataset = toy_dataset();
  EmpiricalBackend backend(0.5);
  backend.fit(dataset);
  const auto [graph, trace] = sample_graph(toy_config(), backend, 13);
  CHECK(trace.h2.graph.node_count() == 2);
  CHECK(trace.assembled_nodes == 6);
  // resampled communities keep their training degree multisets (triangles
  // cannot be rewired), so the two parts stay triangles
  CHECK(graph.node_count() == 6);
  CHECK(graph.edge_count() >= 7);
  const auto [again, trace2] = sample_graph(toy_config(), backend, 13);
  CHECK(again.structurally_equal(graph));
}

TEST_CASE("schedule independence: identical bytes across worker counts") {
  const auto dataset = toy_dataset();
  StatisticalBackend backend;
  backend.fit(dataset);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    std::set<std::string> outputs;
    for (std::size_t workers : {1u, 4u, 16u}) {
      PipelineConfig cfg = toy_config();
      cfg.workers = workers;
      const auto [graph, trace] = sample_graph(cfg, backend, seed);
      outputs.insert(graph_to_string(graph));
    }
    CHECK(outputs.size() == 1);
  }
}

TEST_CASE("job accounting and derived-seed disjointness") {
  SbmSpec spec;
  spec.graph_count = 20;
  spec.p_inter = 0.05;
  spec.seed = 2;
  GraphCorpus corpus = generate_sbm_corpus(spec);
  for (auto& g : corpus.graphs) g = g.with_uniform_node_labels(0);
  const auto dataset = build_from_corpus(corpus, 2.0, 31);
  StatisticalBackend backend;
  backend.fit(dataset);
  PipelineConfig cfg = toy_config();
  cfg.workers = 4;
  const auto [graph, trace] = sample_graph(cfg, backend, 1234);
  CHECK(trace.h1_jobs.size() == trace.h2.graph.node_count());
  CHECK(trace.cross_jobs.size() == trace.h2.graph.edge_count());
  std::set<std::uint64_t> seeds;
  for (const auto& job : trace.h1_jobs) seeds.insert(job.seed);
  for (const auto& job : trace.cross_jobs) seeds.insert(job.seed);
  CHECK(seeds.size() == trace.h1_jobs.size() + trace.cross_jobs.size());

  if (!trace.lcc_trimmed) check_edge_provenance(graph, trace);
}

TEST_CASE("mask safety end-to-end via edge provenance") {
  const auto dataset = toy_dataset();
  StatisticalBackend backend;
  backend.fit(dataset);
  for (int t = 0; t < 10; ++t) {
    const auto [graph, trace] = sample_graph(toy_config(), backend, mix64(50, t));
    if (!trace.lcc_trimmed) check_edge_provenance(graph, trace);
  }
}

TEST_CASE("scaling probe reaches the quadratic regime") {
  PipelineConfig cfg = toy_config();
  cfg.workers = 4;
  const ScalingReport report = scaling_probe(20, cfg);
  CHECK(report.h2_nodes == 20);
  CHECK(report.output_nodes >= 20 * 12);  // sizes drawn from [12, 20]
  CHECK(report.peak_pair_size <= 2 * report.max_h1_size);
  CHECK(report.max_h1_size <= 20);

  const ScalingReport tiny = scaling_probe(1, cfg);
  CHECK(tiny.output_nodes >= 1);
}

TEST_CASE("run_experiment rejects unknown names and missing paths") {
  PipelineConfig cfg = toy_config();
  CHECK_THROWS_AS(run_experiment("bogus", cfg), ConfigError);
  CHECK_THROWS_AS(run_experiment("sbm", cfg), ConfigError);  // no corpus path
  cfg.paths["corpus"] = "/nonexistent/corpus.txt";
  CHECK_THROWS_AS(run_experiment("sbm", cfg), DataError);
}

TEST_CASE("sbm experiment end-to-end at reduced scale") {
  const auto dir = std::filesystem::temp_directory_path() / "higgs_test_experiment";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  SbmSpec spec;
  spec.graph_count = 200;
  spec.p_inter = 0.005;
  spec.seed = 7;
  write_corpus(generate_sbm_corpus(spec), dir / "corpus.txt");

  PipelineConfig cfg;
  cfg.resolution = 2.0;
  cfg.master_seed = 11;
  cfg.workers = 4;
  cfg.sample_count = 6;  // keep the unit suite fast; acceptance runs 40
  cfg.max_h1_size = 300;
  cfg.out_dir = dir / "out";
  cfg.paths["corpus"] = dir / "corpus.txt";

  const ExperimentResult result = run_experiment("sbm", cfg);
  CHECK(result.stats_rows == std::vector<std::string>{"sbm", "higgs", "bter", "er"});
  CHECK(std::filesystem::exists(dir / "out" / "stats.tsv"));
  CHECK(std::filesystem::exists(dir / "out" / "mmd.tsv"));
  CHECK(std::filesystem::exists(dir / "out" / "qq.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "manifest.txt"));
  CHECK(result.generated.size() == 6);
  REQUIRE(result.whole_mmd_er.has_value());
  CHECK(result.whole_mmd_higgs.score("degree").has_value());
  CHECK(result.whole_mmd_er->score("degree").has_value());
}
