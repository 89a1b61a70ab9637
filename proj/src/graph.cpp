#include "higgs/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_set>

namespace higgs {

AttributedGraph::AttributedGraph(std::size_t node_count, std::vector<NodePair> edges,
                                 std::vector<LabelId> node_labels,
                                 std::vector<LabelId> edge_labels,
                                 std::optional<LabelId> graph_label, LabelVocab label_vocab)
    : node_count_(node_count),
      node_labels_(std::move(node_labels)),
      graph_label_(graph_label),
      label_vocab_(std::move(label_vocab)) {
  if (!node_labels_.empty() && node_labels_.size() != node_count_) {
    throw DataError("node label count " + std::to_string(node_labels_.size()) +
                    " does not match node count " + std::to_string(node_count_));
  }
  if (!edge_labels.empty() && edge_labels.size() != edges.size()) {
    throw DataError("edge label count " + std::to_string(edge_labels.size()) +
                    " does not match edge count " + std::to_string(edges.size()));
  }
  for (auto& [u, v] : edges) {
    if (u == v) throw DataError("self-loop at node " + std::to_string(u));
    if (u >= node_count_ || v >= node_count_) {
      throw DataError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") references a node >= node count " + std::to_string(node_count_));
    }
    if (u > v) std::swap(u, v);
  }
  if (edge_labels.empty()) {
    std::sort(edges.begin(), edges.end());
    edges_ = std::move(edges);
  } else {
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    edges_.reserve(edges.size());
    edge_labels_.reserve(edges.size());
    for (std::size_t i : order) {
      edges_.push_back(edges[i]);
      edge_labels_.push_back(edge_labels[i]);
    }
  }
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    auto it = std::adjacent_find(edges_.begin(), edges_.end());
    throw DataError("duplicate edge (" + std::to_string(it->first) + ", " +
                    std::to_string(it->second) + ")");
  }
  build_adjacency();
}

void AttributedGraph::build_adjacency() {
  adj_offsets_.assign(node_count_ + 1, 0);
  for (const auto& [u, v] : edges_) {
    ++adj_offsets_[u + 1];
    ++adj_offsets_[v + 1];
  }
  for (std::size_t i = 1; i <= node_count_; ++i) adj_offsets_[i] += adj_offsets_[i - 1];
  adj_.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adj_[cursor[u]++] = v;
    adj_[cursor[v]++] = u;
  }
  // Neighbor lists come out sorted because edges are sorted, except for the
  // interleaving of lower endpoints; sort each run to make lookups binary.
  for (std::size_t v = 0; v < node_count_; ++v) {
    std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[v]),
              adj_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[v + 1]));
  }
}

std::span<const NodeId> AttributedGraph::neighbors(NodeId v) const {
  if (v >= node_count_) throw DataError("node " + std::to_string(v) + " out of range");
  return {adj_.data() + adj_offsets_[v], adj_offsets_[v + 1] - adj_offsets_[v]};
}

std::size_t AttributedGraph::degree(NodeId v) const {
  if (v >= node_count_) throw DataError("node " + std::to_string(v) + " out of range");
  return adj_offsets_[v + 1] - adj_offsets_[v];
}

bool AttributedGraph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count_ || v >= node_count_ || u == v) return false;
  auto nu = neighbors(u);
  return std::binary_search(nu.begin(), nu.end(), v);
}

double AttributedGraph::density() const {
  if (node_count_ < 2) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) /
         (static_cast<double>(node_count_) * static_cast<double>(node_count_ - 1));
}

AttributedGraph AttributedGraph::with_uniform_node_labels(LabelId label,
                                                          LabelVocab vocab) const {
  return AttributedGraph(node_count_, edges_, std::vector<LabelId>(node_count_, label),
                         edge_labels_, graph_label_, std::move(vocab));
}

bool AttributedGraph::structurally_equal(const AttributedGraph& other) const {
  return node_count_ == other.node_count_ && edges_ == other.edges_ &&
         node_labels_ == other.node_labels_ && edge_labels_ == other.edge_labels_ &&
         graph_label_ == other.graph_label_;
}

std::vector<std::vector<NodeId>> connected_components(const AttributedGraph& g) {
  std::vector<std::vector<NodeId>> components;
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeId> queue;
  for (NodeId start = 0; start < g.node_count(); ++start) {
    if (seen[start]) continue;
    seen[start] = true;
    queue.assign(1, start);
    std::vector<NodeId> component;
    while (!queue.empty()) {
      NodeId v = queue.back();
      queue.pop_back();
      component.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

IndexedSubgraph largest_connected_component(const AttributedGraph& g) {
  if (g.node_count() == 0) return {};
  auto components = connected_components(g);
  // Components are emitted in order of their lowest node, so the first of
  // the maximal ones wins ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < components.size(); ++i) {
    if (components[i].size() > components[best].size()) best = i;
  }
  return induced_subgraph(g, components[best]);
}

IndexedSubgraph induced_subgraph(const AttributedGraph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (NodeId v : keep) {
    if (v >= g.node_count()) {
      throw DataError("induced_subgraph: node " + std::to_string(v) +
                      " out of range for graph of " + std::to_string(g.node_count()) +
                      " nodes");
    }
  }
  std::vector<NodeId> remap(g.node_count(), static_cast<NodeId>(-1));
  for (std::size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = static_cast<NodeId>(i);

  std::vector<NodePair> edges;
  std::vector<LabelId> edge_labels;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& [u, v] = g.edges()[e];
    if (remap[u] == static_cast<NodeId>(-1) || remap[v] == static_cast<NodeId>(-1)) continue;
    edges.emplace_back(remap[u], remap[v]);
    if (g.has_edge_labels()) edge_labels.push_back(g.edge_labels()[e]);
  }
  std::vector<LabelId> node_labels;
  if (g.has_node_labels()) {
    node_labels.reserve(keep.size());
    for (NodeId v : keep) node_labels.push_back(g.node_label(v));
  }
  IndexedSubgraph out;
  out.graph = AttributedGraph(keep.size(), std::move(edges), std::move(node_labels),
                              std::move(edge_labels), g.graph_label(), g.label_vocab());
  out.source_nodes = std::move(keep);
  return out;
}

namespace {

LabelVocab merge_vocabs(std::span<const AttributedGraph> parts) {
  LabelVocab merged;
  for (const auto& part : parts) {
    for (const auto& [id, name] : part.label_vocab()) {
      auto [it, inserted] = merged.emplace(id, name);
      if (!inserted && it->second != name) {
        throw DataError("conflicting vocabulary entries for label " + std::to_string(id) +
                        ": '" + it->second + "' vs '" + name + "'");
      }
    }
  }
  return merged;
}

}  // namespace

UnionResult union_disjoint(std::span<const AttributedGraph> parts,
                           std::span<const CrossEdge> cross_edges) {
  std::vector<NodeId> offsets(parts.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    offsets[i] = static_cast<NodeId>(total);
    total += parts[i].node_count();
  }

  std::size_t labeled_nodes = 0, labeled_edges = 0, nonempty = 0;
  for (const auto& part : parts) {
    if (part.node_count() > 0) ++nonempty;
    if (part.has_node_labels()) ++labeled_nodes;
    if (part.has_edge_labels() && part.edge_count() > 0) ++labeled_edges;
  }
  const bool want_node_labels = labeled_nodes > 0;
  if (want_node_labels && labeled_nodes != nonempty) {
    throw DataError("union_disjoint: node labels must be present on all parts or none");
  }

  std::size_t labeled_cross = 0;
  for (const auto& ce : cross_edges) {
    if (ce.label.has_value()) ++labeled_cross;
  }
  const bool want_edge_labels =
      (labeled_edges > 0 || labeled_cross > 0);
  if (want_edge_labels &&
      (labeled_cross != cross_edges.size() ||
       labeled_edges != static_cast<std::size_t>(std::count_if(
                            parts.begin(), parts.end(),
                            [](const AttributedGraph& p) { return p.edge_count() > 0; })))) {
    throw DataError("union_disjoint: edge labels must be present everywhere or nowhere");
  }

  std::vector<NodePair> edges;
  std::vector<LabelId> edge_labels;
  std::vector<LabelId> node_labels;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t e = 0; e < parts[i].edges().size(); ++e) {
      const auto& [u, v] = parts[i].edges()[e];
      edges.emplace_back(offsets[i] + u, offsets[i] + v);
      if (want_edge_labels) edge_labels.push_back(parts[i].edge_labels()[e]);
    }
    if (want_node_labels) {
      node_labels.insert(node_labels.end(), parts[i].node_labels().begin(),
                         parts[i].node_labels().end());
    }
  }

  std::size_t duplicates = 0;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(cross_edges.size() * 2);
  for (const auto& ce : cross_edges) {
    if (ce.part_u >= parts.size() || ce.part_v >= parts.size()) {
      throw DataError("union_disjoint: cross edge references invalid part");
    }
    if (ce.part_u == ce.part_v) {
      throw DataError("union_disjoint: cross edge must join two distinct parts");
    }
    if (ce.u >= parts[ce.part_u].node_count() || ce.v >= parts[ce.part_v].node_count()) {
      throw DataError("union_disjoint: cross edge references invalid local index");
    }
    NodeId gu = offsets[ce.part_u] + ce.u;
    NodeId gv = offsets[ce.part_v] + ce.v;
    if (gu > gv) std::swap(gu, gv);
    const std::uint64_t key = (static_cast<std::uint64_t>(gu) << 32) | gv;
    if (!seen.insert(key).second) {
      ++duplicates;
      continue;
    }
    edges.emplace_back(gu, gv);
    if (want_edge_labels) edge_labels.push_back(*ce.label);
  }

  UnionResult out;
  out.graph = AttributedGraph(total, std::move(edges), std::move(node_labels),
                              std::move(edge_labels), std::nullopt, merge_vocabs(parts));
  out.offsets = std::move(offsets);
  out.duplicate_cross_edges = duplicates;
  if (duplicates > 0) {
    warn("union_disjoint deduplicated " + std::to_string(duplicates) + " cross edge(s)");
  }
  return out;
}

std::string split_name(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    case Split::generated: return "generated";
  }
  return "train";
}

Split split_from_name(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "val") return Split::val;
  if (name == "test") return Split::test;
  if (name == "generated") return Split::generated;
  throw DataError("unknown split name '" + std::string(name) + "'");
}

}  // namespace higgs
