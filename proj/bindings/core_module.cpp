#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "higgs/backend.hpp"
#include "higgs/bter.hpp"
#include "higgs/datasets.hpp"
#include "higgs/graph_io.hpp"
#include "higgs/metrics.hpp"
#include "higgs/pipeline.hpp"

namespace py = pybind11;
using namespace higgs;

namespace {

std::map<std::string, double> scores_dict(const MmdReport& report) {
  std::map<std::string, double> out;
  for (const auto& [name, value] : report.scores) out[name] = value;
  return out;
}

py::dict trace_dict(const SampleTrace& trace) {
  py::dict out;
  out["h2_nodes"] = trace.h2.graph.node_count();
  out["h2_edges"] = trace.h2.graph.edge_count();
  out["assembled_nodes"] = trace.assembled_nodes;
  out["lcc_trimmed"] = trace.lcc_trimmed;
  out["peak_pair_size"] = trace.peak_pair_size;
  out["duplicate_cross_edges"] = trace.duplicate_cross_edges;
  out["stage1_ms"] = trace.stage1_ms;
  out["stage2_ms"] = trace.stage2_ms;
  out["stage3_ms"] = trace.stage3_ms;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hierarchical graph synthesis toolkit (core bindings)";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DataError>(m, "DataError");

  py::class_<AttributedGraph>(m, "AttributedGraph")
      .def(py::init<>())
      .def(py::init([](std::size_t node_count, std::vector<std::pair<NodeId, NodeId>> edges,
                       std::vector<LabelId> node_labels) {
             return AttributedGraph(node_count, std::move(edges), std::move(node_labels));
           }),
           py::arg("node_count"), py::arg("edges"),
           py::arg("node_labels") = std::vector<LabelId>{})
      .def_property_readonly("node_count", &AttributedGraph::node_count)
      .def_property_readonly("edge_count", &AttributedGraph::edge_count)
      .def_property_readonly("edges", &AttributedGraph::edges)
      .def_property_readonly("node_labels", &AttributedGraph::node_labels)
      .def("degree", &AttributedGraph::degree, py::arg("node"))
      .def("has_edge", &AttributedGraph::has_edge, py::arg("u"), py::arg("v"))
      .def("density", &AttributedGraph::density)
      .def("structurally_equal", &AttributedGraph::structurally_equal)
      .def("__repr__", [](const AttributedGraph& g) {
        return "AttributedGraph(nodes=" + std::to_string(g.node_count()) +
               ", edges=" + std::to_string(g.edge_count()) + ")";
      });

  m.def("read_graph", &read_graph, py::arg("path"));
  m.def("write_graph", &write_graph, py::arg("graph"), py::arg("path"));
  m.def(
      "read_corpus",
      [](const std::filesystem::path& path) { return read_corpus(path).graphs; },
      py::arg("path"));
  m.def(
      "write_corpus",
      [](const std::vector<AttributedGraph>& graphs, const std::filesystem::path& path,
         const std::string& provenance) {
        GraphCorpus corpus;
        corpus.graphs = graphs;
        corpus.provenance = provenance;
        write_corpus(corpus, path);
      },
      py::arg("graphs"), py::arg("path"), py::arg("provenance") = "python");

  m.def("largest_connected_component",
        [](const AttributedGraph& g) { return largest_connected_component(g).graph; });

  m.def(
      "generate_sbm_corpus",
      [](std::size_t graph_count, std::size_t k_min, std::size_t k_max, std::size_t size_min,
         std::size_t size_max, double p_in, double p_out, std::uint64_t seed) {
        SbmSpec spec;
        spec.graph_count = graph_count;
        spec.communities_min = k_min;
        spec.communities_max = k_max;
        spec.community_size_min = size_min;
        spec.community_size_max = size_max;
        spec.p_intra = p_in;
        spec.p_inter = p_out;
        spec.seed = seed;
        return generate_sbm_corpus(spec).graphs;
      },
      py::arg("graph_count") = 200, py::arg("k_min") = 2, py::arg("k_max") = 5,
      py::arg("size_min") = 20, py::arg("size_max") = 40, py::arg("p_in") = 0.3,
      py::arg("p_out") = 0.05, py::arg("seed") = 0);

  py::class_<Partition>(m, "Partition")
      .def_readonly("assignment", &Partition::assignment)
      .def_readonly("resolution", &Partition::resolution)
      .def_readonly("modularity", &Partition::modularity)
      .def_readonly("seed", &Partition::seed)
      .def_readonly("pass_modularity", &Partition::pass_modularity);

  m.def(
      "modularity",
      [](const AttributedGraph& g, const std::vector<NodeId>& assignment, double resolution) {
        return modularity(g, assignment, resolution);
      },
      py::arg("graph"), py::arg("assignment"), py::arg("resolution") = 1.0);
  m.def("louvain", &louvain, py::arg("graph"), py::arg("resolution") = 1.0,
        py::arg("seed") = 0);
  m.def(
      "partition_stats",
      [](const Partition& p) {
        const PartitionStats stats = partition_stats(p);
        return py::make_tuple(stats.community_count, stats.median_community_size);
      },
      py::arg("partition"));

  py::class_<HierarchicalDataset>(m, "HierarchicalDataset")
      .def_property_readonly("h2_count",
                             [](const HierarchicalDataset& d) { return d.h2_samples.size(); })
      .def_property_readonly("h1_count",
                             [](const HierarchicalDataset& d) { return d.h1_samples.size(); })
      .def_property_readonly("pair_count",
                             [](const HierarchicalDataset& d) { return d.pair_samples.size(); });

  m.def("build_from_large_graph", &build_from_large_graph, py::arg("graph"),
        py::arg("resolution"), py::arg("repeats"), py::arg("seed"));
  m.def(
      "build_from_corpus",
      [](const std::vector<AttributedGraph>& graphs, double resolution, std::uint64_t seed) {
        GraphCorpus corpus;
        corpus.graphs = graphs;
        return build_from_corpus(corpus, resolution, seed);
      },
      py::arg("graphs"), py::arg("resolution"), py::arg("seed"));
  m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("dir"));
  m.def("load_dataset", &load_dataset, py::arg("dir"));

  py::class_<GeneratorBackend>(m, "GeneratorBackend")
      .def("fit", &GeneratorBackend::fit)
      .def("name", &GeneratorBackend::name)
      .def("sample_h1",
           [](const GeneratorBackend& b, LabelId condition, std::size_t size_hint,
              std::uint64_t seed) { return b.sample_h1(condition, size_hint, seed); })
      .def("sample_h2",
           [](const GeneratorBackend& b, std::uint64_t seed) { return b.sample_h2(seed).graph; })
      .def("sample_cross_edges",
           [](const GeneratorBackend& b, const AttributedGraph& left,
              const AttributedGraph& right, std::uint64_t seed) {
             return b.sample_cross_edges(left, right, std::nullopt, seed);
           });
  py::class_<StatisticalBackend, GeneratorBackend>(m, "StatisticalBackend").def(py::init<>());
  py::class_<EmpiricalBackend, GeneratorBackend>(m, "EmpiricalBackend")
      .def(py::init<double>(), py::arg("rewire_fraction") = 0.3);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("backend", &PipelineConfig::backend)
      .def_readwrite("resolution", &PipelineConfig::resolution)
      .def_readwrite("repeats", &PipelineConfig::repeats)
      .def_readwrite("master_seed", &PipelineConfig::master_seed)
      .def_readwrite("workers", &PipelineConfig::workers)
      .def_readwrite("max_h1_size", &PipelineConfig::max_h1_size)
      .def_readwrite("sample_count", &PipelineConfig::sample_count)
      .def_readwrite("out_dir", &PipelineConfig::out_dir)
      .def("set_path", [](PipelineConfig& cfg, const std::string& key,
                          const std::filesystem::path& value) { cfg.paths[key] = value; });

  m.def(
      "sample_graph",
      [](const PipelineConfig& cfg, const GeneratorBackend& backend, std::uint64_t seed) {
        auto [graph, trace] = sample_graph(cfg, backend, seed);
        return py::make_tuple(std::move(graph), trace_dict(trace));
      },
      py::arg("config"), py::arg("backend"), py::arg("seed"));

  m.def(
      "graph_stats",
      [](const AttributedGraph& g) {
        const GraphStats stats = graph_stats(g);
        py::dict out;
        out["nodes"] = stats.nodes;
        out["edges"] = stats.edges;
        out["diameter"] = stats.diameter;
        out["diameter_exact"] = stats.diameter_exact;
        out["clustering"] = stats.clustering;
        out["density"] = stats.density;
        out["transitivity"] = stats.transitivity;
        out["n_c"] = stats.n_c;
        out["c_med"] = stats.c_med;
        return out;
      },
      py::arg("graph"));

  m.def(
      "corpus_mmd",
      [](const std::vector<AttributedGraph>& real, const std::vector<AttributedGraph>& generated) {
        return scores_dict(corpus_mmd(real, generated));
      },
      py::arg("real"), py::arg("generated"));
  m.def(
      "community_eval",
      [](const AttributedGraph& real, const AttributedGraph& generated, std::uint64_t seed) {
        return scores_dict(community_eval(real, generated, seed));
      },
      py::arg("real"), py::arg("generated"), py::arg("seed") = 1);
  m.def("quantiles", &quantiles, py::arg("values"), py::arg("q"));

  m.def(
      "bter_sample",
      [](const AttributedGraph& target, std::uint64_t seed) {
        return sample_bter(fit_bter(target), seed).graph;
      },
      py::arg("target"), py::arg("seed") = 1);

  m.def("run_experiment",
        [](const std::string& name, const PipelineConfig& cfg) {
          const ExperimentResult result = run_experiment(name, cfg);
          py::dict out;
          out["out_dir"] = result.out_dir;
          out["generated_count"] = result.generated.size();
          return out;
        },
        py::arg("name"), py::arg("config"));

  m.def("mix64", [](std::uint64_t seed, std::uint64_t a) { return mix64(seed, a); });
}
