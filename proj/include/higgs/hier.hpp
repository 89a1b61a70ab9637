#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "higgs/graph.hpp"
#include "higgs/partition.hpp"

namespace higgs {

/// Low-resolution template: one node per community, node labels carry the
/// majority class of the community it stands for, size hints its node count.
/// Edges are unlabeled by default; the label channel exists for conditioned
/// cross-edge sampling.
struct H2Template {
  AttributedGraph graph;
  std::vector<std::size_t> node_size_hints;
};

/// Training sample for cross-edge models: two communities plus the edges
/// between them, in local coordinates.
struct PairSample {
  AttributedGraph left;
  AttributedGraph right;
  std::vector<NodePair> cross_edges;  // (left local, right local)
  std::optional<LabelId> condition;
  std::size_t repeat = 0;
  NodeId left_h2_node = 0;
  NodeId right_h2_node = 0;
};

struct H1Sample {
  AttributedGraph graph;
  LabelId condition = 0;
  std::size_t repeat = 0;
  NodeId h2_node = 0;
  std::vector<NodeId> source_nodes;  // map back into the segmented source
};

struct HierSourceMeta {
  double resolution = 1.0;
  std::size_t repeats = 1;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> repeat_seeds;
  std::uint64_t source_hash = 0;
  std::size_t lcc_trimmed_graphs = 0;  // sources reduced to their LCC
};

struct HierarchicalDataset {
  std::vector<H2Template> h2_samples;   // index == repeat (or corpus index)
  std::vector<H1Sample> h1_samples;
  std::vector<PairSample> pair_samples;
  HierSourceMeta source_meta;
};

/// Most frequent node label; ties break toward the smallest label id.
LabelId majority_label(const AttributedGraph& g);

/// Segments one large labeled graph `repeats` times with derived seeds
/// mix64(seed, repeat) and emits one template, the community graphs and the
/// connected-pair samples per repeat. The graph is reduced to its LCC first
/// when disconnected.
HierarchicalDataset build_from_large_graph(const AttributedGraph& g, double resolution,
                                           std::size_t repeats, std::uint64_t seed);

/// One template per corpus graph, single segmentation each (the corpus
/// already provides multiplicity). Unlabeled graphs receive the dummy
/// class 0.
HierarchicalDataset build_from_corpus(const GraphCorpus& corpus, double resolution,
                                      std::uint64_t seed);

/// Reassembles one repeat from its community graphs and pair samples.
/// source_nodes maps assembled indices back into the segmented source, so a
/// reconstruction can be compared edge-for-edge.
IndexedSubgraph reassemble_repeat(const HierarchicalDataset& dataset, std::size_t repeat);

// Directory layout: manifest.txt plus h2/, h1/, pairs/ in the native graph
// format. Pair files store left and right as one combined graph (left block
// first) with the split point in a `# pair ...` metadata comment.
void save_dataset(const HierarchicalDataset& dataset, const std::filesystem::path& dir);
HierarchicalDataset load_dataset(const std::filesystem::path& dir);

}  // namespace higgs
