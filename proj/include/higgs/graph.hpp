#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "higgs/common.hpp"

namespace higgs {

using NodePair = std::pair<NodeId, NodeId>;
using LabelVocab = std::map<LabelId, std::string>;

/// Simple undirected graph with optional categorical labels on nodes, edges
/// and the graph itself. Immutable after construction and safe to share
/// read-only across threads. Edges are canonicalized to (min, max) and kept
/// in ascending lexicographic order; edge labels stay aligned with that
/// order.
class AttributedGraph {
 public:
  AttributedGraph() = default;
  AttributedGraph(std::size_t node_count, std::vector<NodePair> edges,
                  std::vector<LabelId> node_labels = {},
                  std::vector<LabelId> edge_labels = {},
                  std::optional<LabelId> graph_label = std::nullopt,
                  LabelVocab label_vocab = {});

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<NodePair>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const;
  double density() const;

  bool has_node_labels() const { return !node_labels_.empty(); }
  bool has_edge_labels() const { return !edge_labels_.empty(); }
  LabelId node_label(NodeId v) const { return node_labels_.at(v); }
  const std::vector<LabelId>& node_labels() const { return node_labels_; }
  const std::vector<LabelId>& edge_labels() const { return edge_labels_; }
  std::optional<LabelId> graph_label() const { return graph_label_; }
  const LabelVocab& label_vocab() const { return label_vocab_; }

  /// Copy with every node assigned the same label (used to give unlabeled
  /// corpora a dummy conditioning class).
  AttributedGraph with_uniform_node_labels(LabelId label,
                                           LabelVocab vocab = {}) const;

  /// Node count, edge set, labels and graph label all equal. Vocabulary is
  /// presentation only and not compared.
  bool structurally_equal(const AttributedGraph& other) const;

 private:
  void build_adjacency();

  std::size_t node_count_ = 0;
  std::vector<NodePair> edges_;
  std::vector<LabelId> node_labels_;
  std::vector<LabelId> edge_labels_;
  std::optional<LabelId> graph_label_;
  LabelVocab label_vocab_;
  std::vector<std::size_t> adj_offsets_;
  std::vector<NodeId> adj_;
};

/// Subgraph with compacted indices plus the map back to the source graph:
/// source_nodes[new_index] == original index.
struct IndexedSubgraph {
  AttributedGraph graph;
  std::vector<NodeId> source_nodes;
};

std::vector<std::vector<NodeId>> connected_components(const AttributedGraph& g);

/// Largest component; ties broken by the lowest contained original index.
/// Empty input yields an empty graph.
IndexedSubgraph largest_connected_component(const AttributedGraph& g);

/// Induced subgraph on the given nodes (deduplicated, compacted in ascending
/// source order). Out-of-range indices are rejected.
IndexedSubgraph induced_subgraph(const AttributedGraph& g, std::span<const NodeId> nodes);

struct CrossEdge {
  std::size_t part_u;
  NodeId u;
  std::size_t part_v;
  NodeId v;
  std::optional<LabelId> label{};
};

struct UnionResult {
  AttributedGraph graph;
  std::vector<NodeId> offsets;             // offsets[i] = first global index of part i
  std::size_t duplicate_cross_edges = 0;   // silently deduplicated, tallied
};

/// Disjoint union of parts in order, plus cross edges given in
/// (part, local index) coordinates. Duplicate cross edges are deduplicated
/// and tallied; anything referencing an invalid part or index is rejected.
UnionResult union_disjoint(std::span<const AttributedGraph> parts,
                           std::span<const CrossEdge> cross_edges);

enum class Split { train, val, test, generated };

std::string split_name(Split split);
Split split_from_name(std::string_view name);

/// Ordered list of graphs; order is stable under serialization.
struct GraphCorpus {
  std::vector<AttributedGraph> graphs;
  std::string provenance;
  Split split = Split::train;
};

}  // namespace higgs
