// Command-line front end: dataset construction, ingestion, hierarchy
// building, backend fitting, sampling, the BTER baseline, evaluation, the
// experiment harness and the scaling probe.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime
// error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "higgs/backend.hpp"
#include "higgs/bter.hpp"
#include "higgs/datasets.hpp"
#include "higgs/graph_io.hpp"
#include "higgs/metrics.hpp"
#include "higgs/pipeline.hpp"

namespace {

using namespace higgs;

PipelineConfig load_config(const std::string& config_path) {
  return config_path.empty() ? PipelineConfig{} : read_config(config_path);
}

std::string cell(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

void print_ingest_report(const std::string& name, const IngestReport& report) {
  std::cout << name << ": raw nodes " << report.raw_nodes << ", raw edges " << report.raw_edges
            << "; kept " << report.graph.node_count() << " nodes / "
            << report.graph.edge_count() << " edges";
  if (report.skipped_rows > 0) std::cout << "; skipped rows " << report.skipped_rows;
  if (report.unlabeled_nodes > 0) std::cout << "; unlabeled nodes " << report.unlabeled_nodes;
  std::cout << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"hierarchical graph synthesis toolkit"};
  app.require_subcommand(1);

  // dataset sbm
  auto* dataset_cmd = app.add_subcommand("dataset", "construct benchmark datasets");
  dataset_cmd->require_subcommand(1);
  auto* sbm_cmd = dataset_cmd->add_subcommand("sbm", "generate a stochastic block model corpus");
  SbmSpec sbm_spec;
  std::string sbm_out;
  sbm_cmd->add_option("--count", sbm_spec.graph_count, "number of graphs")->capture_default_str();
  sbm_cmd->add_option("--k-min", sbm_spec.communities_min, "min communities")
      ->capture_default_str();
  sbm_cmd->add_option("--k-max", sbm_spec.communities_max, "max communities")
      ->capture_default_str();
  sbm_cmd->add_option("--size-min", sbm_spec.community_size_min, "min community size")
      ->capture_default_str();
  sbm_cmd->add_option("--size-max", sbm_spec.community_size_max, "max community size")
      ->capture_default_str();
  sbm_cmd->add_option("--p-in", sbm_spec.p_intra, "intra-community edge probability")
      ->capture_default_str();
  sbm_cmd->add_option("--p-out", sbm_spec.p_inter, "inter-community edge probability")
      ->capture_default_str();
  sbm_cmd->add_option("--seed", sbm_spec.seed, "rng seed")->capture_default_str();
  sbm_cmd->add_option("--out", sbm_out, "output corpus file")->required();

  // ingest cora|facebook
  auto* ingest_cmd = app.add_subcommand("ingest", "ingest published graph datasets");
  ingest_cmd->require_subcommand(1);
  auto* cora_cmd = ingest_cmd->add_subcommand("cora", "cora citation network");
  std::string cora_content, cora_cites, cora_out;
  cora_cmd->add_option("--content", cora_content, "cora.content path")->required();
  cora_cmd->add_option("--cites", cora_cites, "cora.cites path")->required();
  cora_cmd->add_option("--out", cora_out, "output graph file")->required();
  auto* fb_cmd = ingest_cmd->add_subcommand("facebook", "musae page-page network");
  std::string fb_edges, fb_targets, fb_out;
  fb_cmd->add_option("--edges", fb_edges, "edges csv path")->required();
  fb_cmd->add_option("--targets", fb_targets, "target csv path")->required();
  fb_cmd->add_option("--out", fb_out, "output graph file")->required();

  // build-hier
  auto* hier_cmd = app.add_subcommand("build-hier", "build the hierarchical training corpus");
  std::string hier_graph, hier_corpus, hier_out;
  double hier_resolution = 2.0;
  std::size_t hier_repeats = 32;
  std::uint64_t hier_seed = 1;
  hier_cmd->add_option("--graph", hier_graph, "single large source graph");
  hier_cmd->add_option("--corpus", hier_corpus, "corpus source file");
  hier_cmd->add_option("--resolution", hier_resolution, "louvain resolution")
      ->capture_default_str();
  hier_cmd->add_option("--repeats", hier_repeats, "segmentation repeats (single graph)")
      ->capture_default_str();
  hier_cmd->add_option("--seed", hier_seed, "master seed")->capture_default_str();
  hier_cmd->add_option("--out", hier_out, "output dataset directory")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit a generator backend on a dataset");
  std::string fit_backend = "statistical", fit_data, fit_out;
  fit_cmd->add_option("--backend", fit_backend, "statistical | empirical")
      ->capture_default_str();
  fit_cmd->add_option("--data", fit_data, "hierarchical dataset directory")->required();
  fit_cmd->add_option("--out", fit_out, "output model file")->required();

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "sample graphs through the three stages");
  std::string sample_config, sample_model, sample_data, sample_out;
  std::size_t sample_count = 1;
  std::uint64_t sample_seed = 0;
  bool sample_have_seed = false;
  sample_cmd->add_option("--config", sample_config, "pipeline config file");
  sample_cmd->add_option("--model", sample_model, "fitted model file")->required();
  sample_cmd->add_option("--data", sample_data,
                         "dataset directory (required by the empirical backend)");
  sample_cmd->add_option("--count", sample_count, "number of samples")->capture_default_str();
  sample_cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&](std::uint64_t s) {
        sample_seed = s;
        sample_have_seed = true;
      },
      "override the config master seed");
  sample_cmd->add_option("--out", sample_out, "output corpus file")->required();

  // bter
  auto* bter_cmd = app.add_subcommand("bter", "fit and sample the BTER baseline");
  std::string bter_in, bter_out;
  std::uint64_t bter_seed = 1;
  bter_cmd->add_option("--in", bter_in, "target graph file")->required();
  bter_cmd->add_option("--seed", bter_seed, "rng seed")->capture_default_str();
  bter_cmd->add_option("--out", bter_out, "output graph file")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "graph fidelity evaluation");
  std::string eval_real, eval_generated, eval_out, eval_config;
  bool eval_communities = false;
  eval_cmd->add_option("--real", eval_real, "real graph or corpus file")->required();
  eval_cmd->add_option("--generated", eval_generated, "generated graph or corpus file")
      ->required();
  eval_cmd->add_option("--config", eval_config, "pipeline config file");
  eval_cmd->add_flag("--communities", eval_communities,
                     "also run the community-resampling evaluation");
  eval_cmd->add_option("--out", eval_out, "output directory")->required();

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a full benchmark experiment");
  std::string exp_name, exp_config;
  exp_cmd->add_option("name", exp_name, "sbm | cora | facebook")->required();
  exp_cmd->add_option("--config", exp_config, "pipeline config file")->required();

  // scaling-probe
  auto* probe_cmd = app.add_subcommand("scaling-probe", "quadratic-extension scaling probe");
  std::size_t probe_cap = 50;
  std::string probe_config, probe_out;
  probe_cmd->add_option("--n-max", probe_cap, "backend size cap")->capture_default_str();
  probe_cmd->add_option("--config", probe_config, "pipeline config file");
  probe_cmd->add_option("--out", probe_out, "report file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (sbm_cmd->parsed()) {
    const GraphCorpus corpus = generate_sbm_corpus(sbm_spec);
    write_corpus(corpus, sbm_out);
    std::cout << "wrote " << corpus.graphs.size() << " graphs to " << sbm_out << "\n";
  } else if (cora_cmd->parsed()) {
    const IngestReport report = ingest_cora(cora_content, cora_cites);
    write_graph(report.graph, cora_out);
    print_ingest_report("cora", report);
  } else if (fb_cmd->parsed()) {
    const IngestReport report = ingest_facebook(fb_edges, fb_targets);
    write_graph(report.graph, fb_out);
    print_ingest_report("facebook", report);
  } else if (hier_cmd->parsed()) {
    if (hier_graph.empty() == hier_corpus.empty()) {
      throw ConfigError("build-hier needs exactly one of --graph or --corpus");
    }
    HierarchicalDataset dataset;
    if (!hier_graph.empty()) {
      dataset = build_from_large_graph(read_graph(hier_graph), hier_resolution, hier_repeats,
                                       hier_seed);
    } else {
      dataset = build_from_corpus(read_corpus(hier_corpus), hier_resolution, hier_seed);
    }
    save_dataset(dataset, hier_out);
    std::cout << "wrote " << dataset.h2_samples.size() << " templates, "
              << dataset.h1_samples.size() << " community samples, "
              << dataset.pair_samples.size() << " pair samples to " << hier_out << "\n";
  } else if (fit_cmd->parsed()) {
    make_backend(fit_backend);  // validate the name early
    const HierarchicalDataset dataset = load_dataset(fit_data);
    // Both backends share the statistical model file; the empirical backend
    // additionally reloads the dataset directory at sampling time.
    const ClassConditionedModel model = fit_statistical(dataset);
    write_model(model, fit_out);
    std::cout << "fitted " << fit_backend << " backend over " << model.classes.size()
              << " class(es) -> " << fit_out << "\n";
  } else if (sample_cmd->parsed()) {
    PipelineConfig cfg = load_config(sample_config);
    if (sample_have_seed) cfg.master_seed = sample_seed;
    const ClassConditionedModel model = read_model(sample_model);
    std::unique_ptr<GeneratorBackend> backend;
    if (cfg.backend == "empirical") {
      if (sample_data.empty()) {
        throw ConfigError("the empirical backend needs --data <dataset dir>");
      }
      auto empirical = std::make_unique<EmpiricalBackend>(cfg.rewire_fraction);
      empirical->set_model(model);
      empirical->set_dataset(load_dataset(sample_data));
      backend = std::move(empirical);
    } else {
      backend = std::make_unique<StatisticalBackend>(model);
    }
    GraphCorpus out;
    out.provenance = "higgs sample";
    out.split = Split::generated;
    for (std::size_t s = 0; s < sample_count; ++s) {
      out.graphs.push_back(
          sample_graph(cfg, *backend, mix64(cfg.master_seed, 100, s)).first);
    }
    write_corpus(out, sample_out);
    write_manifest(cfg, std::filesystem::path(sample_out).parent_path().empty()
                            ? "."
                            : std::filesystem::path(sample_out).parent_path(),
                   "sample");
    std::cout << "sampled " << out.graphs.size() << " graph(s) -> " << sample_out << "\n";
  } else if (bter_cmd->parsed()) {
    const AttributedGraph target = read_graph(bter_in);
    const BterSample sample = sample_bter(fit_bter(target), bter_seed);
    write_graph(sample.graph, bter_out);
    std::cout << "bter: " << sample.graph.node_count() << " nodes, "
              << sample.graph.edge_count() << " edges (phase1 " << sample.phase1_edges
              << ", phase2 " << sample.phase2_edges << ", dropped "
              << sample.dropped_collisions << ") -> " << bter_out << "\n";
  } else if (eval_cmd->parsed()) {
    PipelineConfig cfg = load_config(eval_config);
    const MetricsConfig mc = cfg.metrics();
    const GraphCorpus real = read_corpus(eval_real);
    const GraphCorpus generated = read_corpus(eval_generated);
    if (real.graphs.empty() || generated.graphs.empty()) {
      throw DataError("eval inputs must contain at least one graph");
    }
    std::filesystem::create_directories(eval_out);

    std::string stats = "set\tnodes\tedges\tdiameter\tn_c\tc_med\tclustering\tdensity\ttransitivity\n";
    auto stats_row = [&](const std::string& label, const GraphCorpus& corpus) {
      double nodes = 0, edges = 0, diameter = 0, clustering = 0, density = 0, trans = 0,
             n_c = 0, c_med = 0;
      for (const auto& g : corpus.graphs) {
        const GraphStats s = graph_stats(largest_connected_component(g).graph, mc);
        nodes += double(s.nodes);
        edges += double(s.edges);
        diameter += double(s.diameter);
        clustering += s.clustering;
        density += s.density;
        trans += s.transitivity;
        n_c += double(s.n_c);
        c_med += double(s.c_med);
      }
      const double count = double(corpus.graphs.size());
      stats += label + '\t' + cell(nodes / count) + '\t' +
               cell(edges / count) + '\t' + cell(diameter / count) + '\t' +
               cell(n_c / count) + '\t' + cell(c_med / count) + '\t' +
               cell(clustering / count) + '\t' + cell(density / count) +
               '\t' + cell(trans / count) + '\n';
    };
    stats_row("real", real);
    stats_row("generated", generated);
    {
      std::ofstream out(std::filesystem::path(eval_out) / "stats.tsv");
      out << stats;
    }

    std::vector<AttributedGraph> real_lcc, gen_lcc;
    for (const auto& g : real.graphs) real_lcc.push_back(largest_connected_component(g).graph);
    for (const auto& g : generated.graphs) {
      gen_lcc.push_back(largest_connected_component(g).graph);
    }
    const MmdReport whole = corpus_mmd(real_lcc, gen_lcc, mc);
    std::string mmd_text = "set";
    for (const auto& [name, value] : whole.scores) mmd_text += '\t' + name;
    mmd_text += "\ngenerated";
    for (const auto& [name, value] : whole.scores) mmd_text += '\t' + cell(value);
    mmd_text += '\n';
    {
      std::ofstream out(std::filesystem::path(eval_out) / "mmd.tsv");
      out << mmd_text;
    }
    if (eval_communities) {
      const MmdReport comm =
          community_eval(real_lcc.front(), gen_lcc.front(), mix64(cfg.master_seed, 400, 1), mc);
      std::string comm_text = "set";
      for (const auto& [name, value] : comm.scores) comm_text += '\t' + name;
      comm_text += "\ngenerated";
      for (const auto& [name, value] : comm.scores) comm_text += '\t' + cell(value);
      comm_text += '\n';
      std::ofstream out(std::filesystem::path(eval_out) / "mmd_communities.tsv");
      out << comm_text;
    }
    {
      // node-level QQ export, paired real vs sampled quantiles per statistic
      std::vector<QqSeries> series;
      auto add_stat = [&](const std::string& stat, auto&& values_of) {
        for (const auto* side : {&real_lcc, &gen_lcc}) {
          QqSeries s;
          s.stat = stat;
          s.series = side == &real_lcc ? "real" : "sampled";
          for (const auto& g : *side) {
            auto values = values_of(g);
            s.values.insert(s.values.end(), values.begin(), values.end());
          }
          series.push_back(std::move(s));
        }
      };
      add_stat("Degree", [](const AttributedGraph& g) {
        std::vector<double> v;
        for (NodeId n = 0; n < g.node_count(); ++n) v.push_back(double(g.degree(n)));
        return v;
      });
      add_stat("Clustering", [](const AttributedGraph& g) { return local_clustering(g); });
      add_stat("Eccentricity", [&](const AttributedGraph& g) {
        std::vector<double> v;
        const auto ecc = g.node_count() <= mc.exact_eccentricity_threshold
                             ? eccentricities(g)
                             : sampled_eccentricities(g, mc.eccentricity_samples, mc.seed);
        for (std::size_t e : ecc) v.push_back(double(e));
        return v;
      });
      std::ofstream out(std::filesystem::path(eval_out) / "qq.csv");
      out << qq_csv(series, cfg.qq_points);
    }
    write_manifest(cfg, eval_out, "eval");
    std::cout << "evaluation written to " << eval_out << "\n";
  } else if (exp_cmd->parsed()) {
    const PipelineConfig cfg = read_config(exp_config);
    const ExperimentResult result = run_experiment(exp_name, cfg);
    std::cout << "experiment " << exp_name << " written to " << result.out_dir.string() << "\n";
  } else if (probe_cmd->parsed()) {
    const PipelineConfig cfg = load_config(probe_config);
    const ScalingReport report = scaling_probe(probe_cap, cfg);
    std::string text;
    text += "size_cap=" + std::to_string(report.size_cap) + '\n';
    text += "h2_nodes=" + std::to_string(report.h2_nodes) + '\n';
    text += "h2_edges=" + std::to_string(report.h2_edges) + '\n';
    text += "output_nodes=" + std::to_string(report.output_nodes) + '\n';
    text += "output_edges=" + std::to_string(report.output_edges) + '\n';
    text += "max_h1_size=" + std::to_string(report.max_h1_size) + '\n';
    text += "peak_pair_size=" + std::to_string(report.peak_pair_size) + '\n';
    text += "stage1_ms=" + format_double(report.stage1_ms) + '\n';
    text += "stage2_ms=" + format_double(report.stage2_ms) + '\n';
    text += "stage3_ms=" + format_double(report.stage3_ms) + '\n';
    text += "assembly_ms=" + format_double(report.assembly_ms) + '\n';
    if (probe_out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(probe_out);
      out << text;
      std::cout << "scaling report -> " << probe_out << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const higgs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const higgs::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
