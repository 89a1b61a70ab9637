#include "higgs/datasets.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace higgs {

void SbmSpec::validate() const {
  if (graph_count == 0) throw ConfigError("sbm: graph_count must be positive");
  if (communities_min < 1 || communities_min > communities_max) {
    throw ConfigError("sbm: invalid community count range");
  }
  if (community_size_min < 1 || community_size_min > community_size_max) {
    throw ConfigError("sbm: invalid community size range");
  }
  if (p_intra < 0.0 || p_intra > 1.0 || p_inter < 0.0 || p_inter > 1.0) {
    throw ConfigError("sbm: probabilities must lie in [0, 1]");
  }
  if (p_inter > p_intra) throw ConfigError("sbm: p_inter must not exceed p_intra");
}

GraphCorpus generate_sbm_corpus(const SbmSpec& spec) {
  spec.validate();
  GraphCorpus corpus;
  corpus.provenance = "sbm";
  corpus.graphs.reserve(spec.graph_count);
  for (std::size_t g = 0; g < spec.graph_count; ++g) {
    Rng rng(mix64(spec.seed, g));
    const std::size_t k = static_cast<std::size_t>(
        rng.range(static_cast<std::int64_t>(spec.communities_min),
                  static_cast<std::int64_t>(spec.communities_max)));
    std::vector<std::size_t> sizes(k);
    for (auto& size : sizes) {
      size = static_cast<std::size_t>(
          rng.range(static_cast<std::int64_t>(spec.community_size_min),
                    static_cast<std::int64_t>(spec.community_size_max)));
    }
    std::size_t n = 0;
    std::vector<LabelId> labels;
    for (std::size_t b = 0; b < k; ++b) {
      n += sizes[b];
      labels.insert(labels.end(), sizes[b], static_cast<LabelId>(b));
    }
    std::vector<NodePair> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        const double p = labels[u] == labels[v] ? spec.p_intra : spec.p_inter;
        if (rng.bernoulli(p)) edges.emplace_back(u, v);
      }
    }
    corpus.graphs.emplace_back(n, std::move(edges), std::move(labels));
  }
  return corpus;
}

CorpusSplits split_corpus(const GraphCorpus& corpus, std::size_t train_count,
                          std::size_t val_count) {
  if (corpus.graphs.size() < train_count + val_count) {
    throw DataError("corpus too small to split: " + std::to_string(corpus.graphs.size()) +
                    " graphs");
  }
  CorpusSplits splits;
  splits.train.provenance = splits.val.provenance = splits.test.provenance = corpus.provenance;
  splits.train.split = Split::train;
  splits.val.split = Split::val;
  splits.test.split = Split::test;
  for (std::size_t i = 0; i < corpus.graphs.size(); ++i) {
    if (i < train_count) {
      splits.train.graphs.push_back(corpus.graphs[i]);
    } else if (i < train_count + val_count) {
      splits.val.graphs.push_back(corpus.graphs[i]);
    } else {
      splits.test.graphs.push_back(corpus.graphs[i]);
    }
  }
  return splits;
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

// The seven published Cora subject classes, in their conventional order.
const std::array<std::string, 7> kCoraClasses = {
    "Case_Based",      "Genetic_Algorithms",     "Neural_Networks", "Probabilistic_Methods",
    "Reinforcement_Learning", "Rule_Learning",   "Theory"};

}  // namespace

IngestReport ingest_cora(const std::filesystem::path& content_path,
                         const std::filesystem::path& cites_path) {
  std::unordered_map<std::string, LabelId> class_ids;
  LabelVocab vocab;
  for (std::size_t i = 0; i < kCoraClasses.size(); ++i) {
    class_ids[kCoraClasses[i]] = static_cast<LabelId>(i);
    vocab[static_cast<LabelId>(i)] = kCoraClasses[i];
  }

  std::unordered_map<std::string, NodeId> node_ids;
  std::vector<LabelId> labels;
  for (const auto& line : read_lines(content_path)) {
    if (line.empty()) continue;
    auto fields = split_on(line, '\t');
    if (fields.size() < 2) throw DataError("cora content: malformed row '" + line + "'");
    const std::string& paper = fields.front();
    const std::string& class_name = fields.back();
    auto cls = class_ids.find(class_name);
    if (cls == class_ids.end()) {
      throw DataError("cora content: unknown class '" + class_name + "'");
    }
    auto [it, inserted] = node_ids.emplace(paper, static_cast<NodeId>(labels.size()));
    if (!inserted) throw DataError("cora content: duplicate paper id '" + paper + "'");
    labels.push_back(cls->second);
  }

  IngestReport report;
  std::unordered_set<std::uint64_t> edge_keys;
  std::vector<NodePair> edges;
  for (const auto& line : read_lines(cites_path)) {
    if (line.empty()) continue;
    auto fields = split_on(line, '\t');
    if (fields.size() != 2) throw DataError("cora cites: malformed row '" + line + "'");
    auto cited = node_ids.find(fields[0]);
    auto citing = node_ids.find(fields[1]);
    if (cited == node_ids.end() || citing == node_ids.end()) {
      ++report.skipped_rows;
      continue;
    }
    NodeId u = cited->second, v = citing->second;
    if (u == v) {
      ++report.skipped_rows;
      continue;
    }
    if (u > v) std::swap(u, v);
    if (edge_keys.insert((static_cast<std::uint64_t>(u) << 32) | v).second) {
      edges.emplace_back(u, v);
    }
  }
  if (report.skipped_rows > 0) {
    warn("cora cites: skipped " + std::to_string(report.skipped_rows) +
         " row(s) with unknown ids or self-citations");
  }

  const std::size_t paper_count = labels.size();
  AttributedGraph raw(paper_count, std::move(edges), std::move(labels), {}, std::nullopt,
                      vocab);
  report.raw_nodes = raw.node_count();
  report.raw_edges = raw.edge_count();
  report.graph = largest_connected_component(raw).graph;
  return report;
}

IngestReport ingest_facebook(const std::filesystem::path& edges_csv,
                             const std::filesystem::path& target_csv) {
  auto target_lines = read_lines(target_csv);
  if (target_lines.empty()) throw DataError("facebook target: empty file");

  std::unordered_map<std::string, std::string> page_type;
  for (std::size_t i = 1; i < target_lines.size(); ++i) {
    if (target_lines[i].empty()) continue;
    auto fields = split_on(target_lines[i], ',');
    if (fields.size() < 2) {
      throw DataError("facebook target: malformed row '" + target_lines[i] + "'");
    }
    page_type[fields.front()] = fields.back();
  }

  auto edge_lines = read_lines(edges_csv);
  if (edge_lines.empty()) throw DataError("facebook edges: empty file");

  std::unordered_map<std::string, NodeId> node_ids;
  std::vector<std::string> node_keys;
  auto intern = [&](const std::string& key) {
    auto [it, inserted] = node_ids.emplace(key, static_cast<NodeId>(node_keys.size()));
    if (inserted) node_keys.push_back(key);
    return it->second;
  };
  // Interning targets first keeps ids aligned with the published numbering
  // when the target file covers every node.
  for (std::size_t i = 1; i < target_lines.size(); ++i) {
    if (target_lines[i].empty()) continue;
    intern(split_on(target_lines[i], ',').front());
  }

  IngestReport report;
  std::unordered_set<std::uint64_t> edge_keys;
  std::vector<NodePair> edges;
  for (std::size_t i = 1; i < edge_lines.size(); ++i) {
    if (edge_lines[i].empty()) continue;
    auto fields = split_on(edge_lines[i], ',');
    if (fields.size() != 2) {
      throw DataError("facebook edges: malformed row '" + edge_lines[i] + "'");
    }
    NodeId u = intern(fields[0]), v = intern(fields[1]);
    if (u == v) {
      ++report.skipped_rows;
      continue;
    }
    if (u > v) std::swap(u, v);
    if (edge_keys.insert((static_cast<std::uint64_t>(u) << 32) | v).second) {
      edges.emplace_back(u, v);
    }
  }

  std::map<std::string, LabelId> type_ids;
  for (const auto& [node, type] : page_type) type_ids.emplace(type, 0);
  LabelId next_id = 0;
  LabelVocab vocab;
  for (auto& [type, id] : type_ids) {
    id = next_id++;
    vocab[id] = type;
  }
  const LabelId unknown_id = next_id;

  std::vector<LabelId> labels(node_keys.size(), unknown_id);
  for (std::size_t v = 0; v < node_keys.size(); ++v) {
    auto it = page_type.find(node_keys[v]);
    if (it != page_type.end()) {
      labels[v] = type_ids.at(it->second);
    } else {
      ++report.unlabeled_nodes;
    }
  }
  if (report.unlabeled_nodes > 0) {
    vocab[unknown_id] = "unknown";
    warn("facebook ingest: " + std::to_string(report.unlabeled_nodes) +
         " node(s) missing from the target file, labeled 'unknown'");
  }
  if (report.skipped_rows > 0) {
    warn("facebook ingest: skipped " + std::to_string(report.skipped_rows) +
         " self-loop row(s)");
  }

  report.graph = AttributedGraph(node_keys.size(), std::move(edges), std::move(labels), {},
                                 std::nullopt, std::move(vocab));
  report.raw_nodes = report.graph.node_count();
  report.raw_edges = report.graph.edge_count();
  return report;
}

AttributedGraph erdos_renyi_gnm(std::size_t node_count, std::size_t edge_count,
                                std::uint64_t seed) {
  const std::size_t max_edges = node_count < 2 ? 0 : node_count * (node_count - 1) / 2;
  if (edge_count > max_edges) {
    throw ConfigError("erdos_renyi_gnm: requested more edges than pairs available");
  }
  Rng rng(seed);
  std::vector<NodePair> edges;
  edges.reserve(edge_count);
  if (2 * edge_count > max_edges) {
    // Dense request: shuffle the full pair list instead of rejection sampling.
    std::vector<NodePair> pairs;
    pairs.reserve(max_edges);
    for (NodeId u = 0; u < node_count; ++u) {
      for (NodeId v = u + 1; v < node_count; ++v) pairs.emplace_back(u, v);
    }
    rng.shuffle(pairs);
    edges.assign(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(edge_count));
  } else {
    std::unordered_set<std::uint64_t> keys;
    while (edges.size() < edge_count) {
      NodeId u = static_cast<NodeId>(rng.below(node_count));
      NodeId v = static_cast<NodeId>(rng.below(node_count));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (keys.insert((static_cast<std::uint64_t>(u) << 32) | v).second) {
        edges.emplace_back(u, v);
      }
    }
  }
  return AttributedGraph(node_count, std::move(edges));
}

}  // namespace higgs
