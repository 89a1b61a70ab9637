#include "fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <unordered_set>
#include <vector>

#include "higgs/common.hpp"

namespace fixtures {

namespace {

using higgs::NodeId;
using higgs::Rng;

const char* env_or_null(const char* name) {
  const char* value = std::getenv(name);
  return (value != nullptr && value[0] != '\0') ? value : nullptr;
}

// Connected simple graph with exactly `nodes` nodes and `edges` edges:
// random spanning tree plus uniformly drawn extra pairs.
std::vector<std::pair<NodeId, NodeId>> connected_edge_set(std::size_t nodes, std::size_t edges,
                                                          Rng& rng) {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edges);
  std::unordered_set<std::uint64_t> used;
  auto key = [](NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
  };
  for (NodeId v = 1; v < nodes; ++v) {
    const NodeId parent = static_cast<NodeId>(rng.below(v));
    out.emplace_back(parent, v);
    used.insert(key(parent, v));
  }
  while (out.size() < edges) {
    const NodeId u = static_cast<NodeId>(rng.below(nodes));
    const NodeId v = static_cast<NodeId>(rng.below(nodes));
    if (u == v) continue;
    if (used.insert(key(u, v)).second) out.emplace_back(u, v);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

}  // namespace

CoraPaths cora_files(const std::filesystem::path& dir) {
  if (const char* content = env_or_null("HIGGS_CORA_CONTENT")) {
    if (const char* cites = env_or_null("HIGGS_CORA_CITES")) {
      return {content, cites, false};
    }
  }
  std::filesystem::create_directories(dir);
  CoraPaths paths{dir / "cora.content", dir / "cora.cites", true};
  if (std::filesystem::exists(paths.content) && std::filesystem::exists(paths.cites)) {
    return paths;  // already generated in a previous run
  }

  const std::size_t lcc_nodes = 2810;
  const std::size_t lcc_edges = 7981;
  const std::size_t satellite_nodes = 80;  // trimmed by LCC extraction
  const char* classes[7] = {"Case_Based",      "Genetic_Algorithms",
                            "Neural_Networks", "Probabilistic_Methods",
                            "Reinforcement_Learning", "Rule_Learning", "Theory"};

  Rng rng(0xC02AULL);
  std::string content;
  const std::size_t total = lcc_nodes + satellite_nodes;
  for (std::size_t i = 0; i < total; ++i) {
    content += "paper" + std::to_string(i);
    // a couple of placeholder word-vector columns; ingestion ignores them
    content += '\t' + std::to_string(rng.below(2)) + '\t' + std::to_string(rng.below(2));
    content += '\t';
    content += classes[rng.below(7)];
    content += '\n';
  }
  write_file(paths.content, content);

  auto main_edges = connected_edge_set(lcc_nodes, lcc_edges, rng);
  std::string cites;
  for (const auto& [u, v] : main_edges) {
    // cited <tab> citing; some rows duplicated in the reverse direction to
    // exercise symmetrization
    cites += "paper" + std::to_string(u) + '\t' + "paper" + std::to_string(v) + '\n';
    if (rng.below(10) == 0) {
      cites += "paper" + std::to_string(v) + '\t' + "paper" + std::to_string(u) + '\n';
    }
  }
  // satellite components: pairs among the extra nodes
  for (std::size_t i = 0; i < satellite_nodes; i += 2) {
    cites += "paper" + std::to_string(lcc_nodes + i) + '\t' + "paper" +
             std::to_string(lcc_nodes + i + 1) + '\n';
  }
  // a handful of rows referencing unknown papers (skipped with a tally)
  cites += "paper99999\tpaper0\n";
  write_file(paths.cites, cites);
  return paths;
}

FacebookPaths facebook_files(const std::filesystem::path& dir) {
  if (const char* edges = env_or_null("HIGGS_FACEBOOK_EDGES")) {
    if (const char* targets = env_or_null("HIGGS_FACEBOOK_TARGETS")) {
      return {edges, targets, false};
    }
  }
  std::filesystem::create_directories(dir);
  FacebookPaths paths{dir / "musae_facebook_edges.csv", dir / "musae_facebook_target.csv", true};
  if (std::filesystem::exists(paths.edges) && std::filesystem::exists(paths.targets)) {
    return paths;
  }

  const std::size_t nodes = 22470;
  const std::size_t edges = 171002;
  const char* types[4] = {"politician", "governmental", "tvshow", "company"};

  Rng rng(0xFACEB00CULL);
  std::string targets = "id,facebook_id,page_name,page_type\n";
  for (std::size_t i = 0; i < nodes; ++i) {
    targets += std::to_string(i) + ',' + std::to_string(100000 + i) + ",page" +
               std::to_string(i) + ',' + types[rng.below(4)] + '\n';
  }
  write_file(paths.targets, targets);

  // Two-level community structure, as in real page networks: dense subgroups
  // of ~23 nodes nested inside groups of ~187. Low-resolution partitioning
  // merges subgroups into their group; high resolution separates them.
  const std::size_t groups = 120;
  const std::size_t group_size = (nodes + groups - 1) / groups;
  const std::size_t sub_size = 23;
  auto group_base = [&](NodeId v) {
    return static_cast<NodeId>((v / group_size) * group_size);
  };
  auto sub_base = [&](NodeId v) {
    const NodeId base = group_base(v);
    return static_cast<NodeId>(base + ((v - base) / sub_size) * sub_size);
  };
  auto span_from = [&](NodeId base, std::size_t width) {
    return std::min<std::size_t>(width, nodes - base);
  };

  std::string edge_text = "id_1,id_2\n";
  std::unordered_set<std::uint64_t> used;
  auto key = [](NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
  };
  std::size_t placed = 0;
  // spanning tree first (connectivity), biased toward in-subgroup parents
  for (NodeId v = 1; v < nodes; ++v) {
    NodeId parent;
    const double roll = rng.uniform();
    if (roll < 0.8 && v > sub_base(v)) {
      parent = sub_base(v) + static_cast<NodeId>(rng.below(v - sub_base(v)));
    } else if (roll < 0.85 && v > group_base(v)) {
      parent = group_base(v) + static_cast<NodeId>(rng.below(v - group_base(v)));
    } else {
      parent = static_cast<NodeId>(rng.below(v));
    }
    used.insert(key(parent, v));
    edge_text += std::to_string(parent) + ',' + std::to_string(v) + '\n';
    ++placed;
  }
  while (placed < edges) {
    NodeId u = static_cast<NodeId>(rng.below(nodes));
    NodeId v;
    const double roll = rng.uniform();
    if (roll < 0.80) {
      const NodeId base = sub_base(u);
      v = base + static_cast<NodeId>(rng.below(span_from(base, sub_size)));
    } else if (roll < 0.84) {
      const NodeId base = group_base(u);
      v = base + static_cast<NodeId>(rng.below(span_from(base, group_size)));
    } else {
      v = static_cast<NodeId>(rng.below(nodes));
    }
    if (u == v) continue;
    if (!used.insert(key(u, v)).second) continue;
    edge_text += std::to_string(u) + ',' + std::to_string(v) + '\n';
    ++placed;
    // occasional duplicate row in the reverse direction (deduplicated on
    // ingestion, so it does not change the edge count)
    if (rng.below(500) == 0) {
      edge_text += std::to_string(v) + ',' + std::to_string(u) + '\n';
    }
  }
  write_file(paths.edges, edge_text);
  return paths;
}

}  // namespace fixtures
