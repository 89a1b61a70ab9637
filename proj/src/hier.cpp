#include "higgs/hier.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "higgs/graph_io.hpp"

namespace higgs {

namespace {

// One segmentation pass: appends the template, h1 samples and pair samples
// for `source` under `repeat` to the dataset.
void segment_into(HierarchicalDataset& dataset, const AttributedGraph& source,
                  double resolution, std::uint64_t seed, std::size_t repeat) {
  const Partition partition = louvain(source, resolution, seed);
  const auto members = community_members(partition);
  const std::size_t k = members.size();

  std::vector<IndexedSubgraph> communities;
  communities.reserve(k);
  std::vector<LabelId> h2_labels;
  std::vector<std::size_t> size_hints;
  for (const auto& nodes : members) {
    communities.push_back(induced_subgraph(source, nodes));
    h2_labels.push_back(majority_label(communities.back().graph));
    size_hints.push_back(nodes.size());
  }

  // Cross edges grouped per community pair; a pair becomes an h2 edge iff it
  // has at least one cross edge.
  std::map<std::pair<NodeId, NodeId>, std::vector<NodePair>> pair_edges;
  std::vector<NodeId> local(source.node_count());
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < members[c].size(); ++i) local[members[c][i]] = static_cast<NodeId>(i);
  }
  for (const auto& [u, v] : source.edges()) {
    NodeId cu = partition.assignment[u], cv = partition.assignment[v];
    if (cu == cv) continue;
    NodeId lu = local[u], lv = local[v];
    if (cu > cv) {
      std::swap(cu, cv);
      std::swap(lu, lv);
    }
    pair_edges[{cu, cv}].emplace_back(lu, lv);
  }

  std::vector<NodePair> h2_edges;
  h2_edges.reserve(pair_edges.size());
  for (const auto& [key, edges] : pair_edges) h2_edges.push_back(key);

  H2Template tpl;
  tpl.graph = AttributedGraph(k, std::move(h2_edges), std::move(h2_labels), {}, std::nullopt,
                              source.label_vocab());
  tpl.node_size_hints = std::move(size_hints);
  dataset.h2_samples.push_back(std::move(tpl));

  for (std::size_t c = 0; c < k; ++c) {
    H1Sample sample;
    sample.graph = std::move(communities[c].graph);
    sample.condition = dataset.h2_samples.back().graph.node_label(static_cast<NodeId>(c));
    sample.repeat = repeat;
    sample.h2_node = static_cast<NodeId>(c);
    sample.source_nodes = std::move(communities[c].source_nodes);
    dataset.h1_samples.push_back(std::move(sample));
  }

  const std::size_t h1_base = dataset.h1_samples.size() - k;
  for (auto& [key, edges] : pair_edges) {
    PairSample pair;
    pair.left = dataset.h1_samples[h1_base + key.first].graph;
    pair.right = dataset.h1_samples[h1_base + key.second].graph;
    std::sort(edges.begin(), edges.end());
    pair.cross_edges = std::move(edges);
    pair.repeat = repeat;
    pair.left_h2_node = key.first;
    pair.right_h2_node = key.second;
    dataset.pair_samples.push_back(std::move(pair));
  }
}

}  // namespace

LabelId majority_label(const AttributedGraph& g) {
  if (g.node_count() == 0) throw DataError("majority_label of an empty graph");
  if (!g.has_node_labels()) throw DataError("majority_label requires node labels");
  std::map<LabelId, std::size_t> counts;
  for (LabelId label : g.node_labels()) ++counts[label];
  LabelId best = counts.begin()->first;
  std::size_t best_count = counts.begin()->second;
  for (const auto& [label, count] : counts) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

HierarchicalDataset build_from_large_graph(const AttributedGraph& g, double resolution,
                                           std::size_t repeats, std::uint64_t seed) {
  if (resolution <= 0.0) throw ConfigError("resolution must be positive");
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!g.has_node_labels()) throw DataError("build_from_large_graph requires node labels");

  HierarchicalDataset dataset;
  dataset.source_meta.resolution = resolution;
  dataset.source_meta.repeats = repeats;
  dataset.source_meta.master_seed = seed;

  IndexedSubgraph lcc = largest_connected_component(g);
  if (lcc.graph.node_count() < g.node_count()) {
    warn("segmentation source is disconnected; using its largest component (" +
         std::to_string(lcc.graph.node_count()) + " of " + std::to_string(g.node_count()) +
         " nodes)");
    dataset.source_meta.lcc_trimmed_graphs = 1;
  }
  dataset.source_meta.source_hash = graph_hash(lcc.graph);

  for (std::size_t r = 0; r < repeats; ++r) {
    const std::uint64_t repeat_seed = mix64(seed, r);
    dataset.source_meta.repeat_seeds.push_back(repeat_seed);
    segment_into(dataset, lcc.graph, resolution, repeat_seed, r);
  }
  return dataset;
}

HierarchicalDataset build_from_corpus(const GraphCorpus& corpus, double resolution,
                                      std::uint64_t seed) {
  if (resolution <= 0.0) throw ConfigError("resolution must be positive");
  if (corpus.graphs.empty()) throw DataError("build_from_corpus on an empty corpus");

  HierarchicalDataset dataset;
  dataset.source_meta.resolution = resolution;
  dataset.source_meta.repeats = corpus.graphs.size();
  dataset.source_meta.master_seed = seed;

  std::string hash_feed;
  for (std::size_t i = 0; i < corpus.graphs.size(); ++i) {
    AttributedGraph source = corpus.graphs[i].has_node_labels()
                                 ? corpus.graphs[i]
                                 : corpus.graphs[i].with_uniform_node_labels(0);
    IndexedSubgraph lcc = largest_connected_component(source);
    if (lcc.graph.node_count() < source.node_count()) ++dataset.source_meta.lcc_trimmed_graphs;
    hash_feed += graph_to_string(lcc.graph);
    const std::uint64_t graph_seed = mix64(seed, i);
    dataset.source_meta.repeat_seeds.push_back(graph_seed);
    segment_into(dataset, lcc.graph, resolution, graph_seed, i);
  }
  if (dataset.source_meta.lcc_trimmed_graphs > 0) {
    warn(std::to_string(dataset.source_meta.lcc_trimmed_graphs) +
         " corpus graph(s) reduced to their largest component before segmentation");
  }
  dataset.source_meta.source_hash = fnv1a64(hash_feed);
  return dataset;
}

IndexedSubgraph reassemble_repeat(const HierarchicalDataset& dataset, std::size_t repeat) {
  std::vector<const H1Sample*> parts_by_node;
  for (const auto& sample : dataset.h1_samples) {
    if (sample.repeat != repeat) continue;
    if (parts_by_node.size() <= sample.h2_node) parts_by_node.resize(sample.h2_node + 1);
    parts_by_node[sample.h2_node] = &sample;
  }
  if (parts_by_node.empty()) throw DataError("no samples for repeat " + std::to_string(repeat));

  std::vector<AttributedGraph> parts;
  parts.reserve(parts_by_node.size());
  for (const auto* sample : parts_by_node) {
    if (sample == nullptr) throw DataError("missing community in repeat");
    parts.push_back(sample->graph);
  }
  std::vector<CrossEdge> cross;
  for (const auto& pair : dataset.pair_samples) {
    if (pair.repeat != repeat) continue;
    for (const auto& [lu, rv] : pair.cross_edges) {
      cross.push_back({pair.left_h2_node, lu, pair.right_h2_node, rv, std::nullopt});
    }
  }
  UnionResult merged = union_disjoint(parts, cross);

  IndexedSubgraph out;
  out.source_nodes.resize(merged.graph.node_count());
  for (std::size_t c = 0; c < parts_by_node.size(); ++c) {
    const auto& sources = parts_by_node[c]->source_nodes;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      out.source_nodes[merged.offsets[c] + i] = sources[i];
    }
  }
  out.graph = std::move(merged.graph);
  return out;
}

namespace {

std::string pad_index(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  return std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

std::string size_hint_comment(const std::vector<std::size_t>& hints) {
  std::string line = "# size_hints";
  for (std::size_t hint : hints) line += ' ' + std::to_string(hint);
  return line + '\n';
}

std::string join_u64(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& lines) {
  std::map<std::string, std::string> kv;
  for (const auto& line : lines) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError("manifest line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::exists(dir)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

void save_dataset(const HierarchicalDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "h2");
  std::filesystem::create_directories(dir / "h1");
  std::filesystem::create_directories(dir / "pairs");

  {
    std::ofstream manifest(dir / "manifest.txt", std::ios::binary | std::ios::trunc);
    if (!manifest) throw DataError("cannot write manifest in '" + dir.string() + "'");
    manifest << "resolution=" << format_double(dataset.source_meta.resolution) << '\n'
             << "repeats=" << dataset.source_meta.repeats << '\n'
             << "master_seed=" << dataset.source_meta.master_seed << '\n'
             << "repeat_seeds=" << join_u64(dataset.source_meta.repeat_seeds) << '\n'
             << "source_hash=" << dataset.source_meta.source_hash << '\n'
             << "lcc_trimmed_graphs=" << dataset.source_meta.lcc_trimmed_graphs << '\n'
             << "h2_count=" << dataset.h2_samples.size() << '\n'
             << "h1_count=" << dataset.h1_samples.size() << '\n'
             << "pair_count=" << dataset.pair_samples.size() << '\n';
  }

  for (std::size_t i = 0; i < dataset.h2_samples.size(); ++i) {
    std::string text = size_hint_comment(dataset.h2_samples[i].node_size_hints);
    text += graph_to_string(dataset.h2_samples[i].graph);
    std::ofstream out(dir / "h2" / ("t" + pad_index(i, 6) + ".graph"),
                      std::ios::binary | std::ios::trunc);
    out << text;
  }
  for (std::size_t i = 0; i < dataset.h1_samples.size(); ++i) {
    const auto& sample = dataset.h1_samples[i];
    std::string text = "# h1 repeat=" + std::to_string(sample.repeat) +
                       " h2_node=" + std::to_string(sample.h2_node) +
                       " condition=" + std::to_string(sample.condition) + '\n';
    text += "# source_nodes";
    for (NodeId v : sample.source_nodes) text += ' ' + std::to_string(v);
    text += '\n';
    text += graph_to_string(sample.graph);
    std::ofstream out(dir / "h1" / ("s" + pad_index(i, 6) + ".graph"),
                      std::ios::binary | std::ios::trunc);
    out << text;
  }
  for (std::size_t i = 0; i < dataset.pair_samples.size(); ++i) {
    const auto& pair = dataset.pair_samples[i];
    std::vector<AttributedGraph> parts{pair.left, pair.right};
    std::vector<CrossEdge> cross;
    cross.reserve(pair.cross_edges.size());
    for (const auto& [lu, rv] : pair.cross_edges) cross.push_back({0, lu, 1, rv, std::nullopt});
    UnionResult merged = union_disjoint(parts, cross);
    std::string text = "# pair repeat=" + std::to_string(pair.repeat) +
                       " left=" + std::to_string(pair.left_h2_node) +
                       " right=" + std::to_string(pair.right_h2_node) +
                       " left_size=" + std::to_string(pair.left.node_count()) + " condition=" +
                       (pair.condition ? std::to_string(*pair.condition) : std::string("-")) +
                       '\n';
    text += graph_to_string(merged.graph);
    std::ofstream out(dir / "pairs" / ("p" + pad_index(i, 6) + ".graph"),
                      std::ios::binary | std::ios::trunc);
    out << text;
  }
}

namespace {

std::map<std::string, std::string> parse_meta_comment(const std::string& line,
                                                      const std::string& tag) {
  std::map<std::string, std::string> kv;
  std::istringstream in(line);
  std::string token;
  in >> token;  // '#'
  in >> token;  // tag
  if (token != tag) throw DataError("expected '# " + tag + "' metadata comment");
  while (in >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

}  // namespace

HierarchicalDataset load_dataset(const std::filesystem::path& dir) {
  HierarchicalDataset dataset;
  auto manifest = parse_kv(read_lines(dir / "manifest.txt"));
  dataset.source_meta.resolution = std::stod(manifest.at("resolution"));
  dataset.source_meta.repeats = std::stoull(manifest.at("repeats"));
  dataset.source_meta.master_seed = std::stoull(manifest.at("master_seed"));
  dataset.source_meta.source_hash = std::stoull(manifest.at("source_hash"));
  if (auto it = manifest.find("lcc_trimmed_graphs"); it != manifest.end()) {
    dataset.source_meta.lcc_trimmed_graphs = std::stoull(it->second);
  }
  {
    std::istringstream in(manifest.at("repeat_seeds"));
    std::string part;
    while (std::getline(in, part, ',')) {
      if (!part.empty()) dataset.source_meta.repeat_seeds.push_back(std::stoull(part));
    }
  }

  for (const auto& path : sorted_files(dir / "h2")) {
    auto lines = read_lines(path);
    if (lines.empty()) throw DataError("empty template file " + path.string());
    H2Template tpl;
    std::istringstream hint_line(lines[0]);
    std::string token;
    hint_line >> token >> token;  // "#", "size_hints"
    if (token != "size_hints") throw DataError("missing size_hints in " + path.string());
    std::size_t hint = 0;
    while (hint_line >> hint) tpl.node_size_hints.push_back(hint);
    tpl.graph = read_graph(path);
    if (tpl.node_size_hints.size() != tpl.graph.node_count()) {
      throw DataError("size hint count mismatch in " + path.string());
    }
    dataset.h2_samples.push_back(std::move(tpl));
  }

  for (const auto& path : sorted_files(dir / "h1")) {
    auto lines = read_lines(path);
    if (lines.size() < 2) throw DataError("truncated h1 file " + path.string());
    auto kv = parse_meta_comment(lines[0], "h1");
    H1Sample sample;
    sample.repeat = std::stoull(kv.at("repeat"));
    sample.h2_node = static_cast<NodeId>(std::stoul(kv.at("h2_node")));
    sample.condition = static_cast<LabelId>(std::stol(kv.at("condition")));
    {
      std::istringstream in(lines[1]);
      std::string token;
      in >> token >> token;  // "#", "source_nodes"
      if (token != "source_nodes") throw DataError("missing source_nodes in " + path.string());
      NodeId v = 0;
      while (in >> v) sample.source_nodes.push_back(v);
    }
    sample.graph = read_graph(path);
    dataset.h1_samples.push_back(std::move(sample));
  }

  for (const auto& path : sorted_files(dir / "pairs")) {
    auto lines = read_lines(path);
    if (lines.empty()) throw DataError("empty pair file " + path.string());
    auto kv = parse_meta_comment(lines[0], "pair");
    PairSample pair;
    pair.repeat = std::stoull(kv.at("repeat"));
    pair.left_h2_node = static_cast<NodeId>(std::stoul(kv.at("left")));
    pair.right_h2_node = static_cast<NodeId>(std::stoul(kv.at("right")));
    const std::size_t left_size = std::stoull(kv.at("left_size"));
    if (kv.at("condition") != "-") {
      pair.condition = static_cast<LabelId>(std::stol(kv.at("condition")));
    }
    AttributedGraph combined = read_graph(path);
    if (left_size > combined.node_count()) {
      throw DataError("left_size exceeds pair graph in " + path.string());
    }
    std::vector<NodeId> left_nodes(left_size), right_nodes(combined.node_count() - left_size);
    std::iota(left_nodes.begin(), left_nodes.end(), NodeId{0});
    std::iota(right_nodes.begin(), right_nodes.end(), static_cast<NodeId>(left_size));
    pair.left = induced_subgraph(combined, left_nodes).graph;
    pair.right = induced_subgraph(combined, right_nodes).graph;
    for (const auto& [u, v] : combined.edges()) {
      if (u < left_size && v >= left_size) {
        pair.cross_edges.emplace_back(u, static_cast<NodeId>(v - left_size));
      }
    }
    dataset.pair_samples.push_back(std::move(pair));
  }
  return dataset;
}

}  // namespace higgs
