#include "higgs/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace higgs {

namespace {

constexpr double kMinGain = 1e-12;

// Working representation across aggregation levels. self_weight is the full
// internal weight of a supernode (each internal edge counted twice) so that
// strength is preserved level to level.
struct LevelGraph {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<NodeId, double>>> adj;
  std::vector<double> self_weight;
  std::vector<double> strength;
  double total_strength = 0.0;
};

LevelGraph level_from_graph(const AttributedGraph& g) {
  LevelGraph lg;
  lg.n = g.node_count();
  lg.adj.resize(lg.n);
  lg.self_weight.assign(lg.n, 0.0);
  lg.strength.assign(lg.n, 0.0);
  for (const auto& [u, v] : g.edges()) {
    lg.adj[u].emplace_back(v, 1.0);
    lg.adj[v].emplace_back(u, 1.0);
    lg.strength[u] += 1.0;
    lg.strength[v] += 1.0;
  }
  lg.total_strength = 2.0 * static_cast<double>(g.edge_count());
  return lg;
}

// One local-move phase. Nodes are visited in a freshly shuffled order each
// sweep; a node moves to the neighbor community with the largest gain over
// staying, provided it exceeds kMinGain. Equal gains break toward the first
// community encountered while scanning the adjacency. Returns whether any
// move happened.
bool local_move_phase(const LevelGraph& lg, double resolution, Rng& rng,
                      std::vector<NodeId>& community) {
  const double m = lg.total_strength / 2.0;
  std::vector<double> community_strength(lg.n, 0.0);
  for (std::size_t v = 0; v < lg.n; ++v) community_strength[community[v]] += lg.strength[v];

  std::vector<NodeId> order(lg.n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::vector<double> weight_to(lg.n, 0.0);
  std::vector<NodeId> touched;

  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    rng.shuffle(order);
    for (NodeId u : order) {
      const NodeId current = community[u];
      touched.clear();
      for (const auto& [v, w] : lg.adj[u]) {
        const NodeId c = community[v];
        if (weight_to[c] == 0.0) touched.push_back(c);
        weight_to[c] += w;
      }
      community_strength[current] -= lg.strength[u];
      const double stay_links = weight_to[current];
      const double stay_tot = community_strength[current];

      NodeId target = current;
      double best_gain = kMinGain;
      for (NodeId c : touched) {
        if (c == current) continue;
        const double gain =
            (weight_to[c] - stay_links) / m -
            resolution * lg.strength[u] * (community_strength[c] - stay_tot) / (2.0 * m * m);
        if (gain > best_gain) {
          best_gain = gain;
          target = c;
        }
      }
      community_strength[target] += lg.strength[u];
      community[u] = target;
      if (target != current) {
        moved = true;
        any_move = true;
      }
      for (NodeId c : touched) weight_to[c] = 0.0;
    }
  }
  return any_move;
}

// Renumber community ids densely by first occurrence over node order.
std::size_t compact_ids(std::vector<NodeId>& ids) {
  std::vector<NodeId> remap(ids.size(), static_cast<NodeId>(-1));
  NodeId next = 0;
  for (NodeId& id : ids) {
    if (remap[id] == static_cast<NodeId>(-1)) remap[id] = next++;
    id = remap[id];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& lg, std::span<const NodeId> community,
                     std::size_t community_count) {
  LevelGraph out;
  out.n = community_count;
  out.adj.resize(out.n);
  out.self_weight.assign(out.n, 0.0);
  out.strength.assign(out.n, 0.0);
  out.total_strength = lg.total_strength;

  for (std::size_t v = 0; v < lg.n; ++v) {
    out.strength[community[v]] += lg.strength[v];
    out.self_weight[community[v]] += lg.self_weight[v];
  }
  // Cross-community weights collected once per undirected pair, sorted so the
  // aggregated adjacency order is deterministic.
  std::vector<std::pair<std::uint64_t, double>> cross;
  for (std::size_t v = 0; v < lg.n; ++v) {
    const NodeId cv = community[v];
    for (const auto& [w, weight] : lg.adj[v]) {
      if (w < v) continue;  // each undirected edge once
      const NodeId cw = community[w];
      if (cv == cw) {
        out.self_weight[cv] += 2.0 * weight;
      } else {
        const NodeId a = std::min(cv, cw), b = std::max(cv, cw);
        cross.emplace_back((static_cast<std::uint64_t>(a) << 32) | b, weight);
      }
    }
  }
  std::sort(cross.begin(), cross.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i < cross.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < cross.size() && cross[j].first == cross[i].first) sum += cross[j++].second;
    const NodeId a = static_cast<NodeId>(cross[i].first >> 32);
    const NodeId b = static_cast<NodeId>(cross[i].first & 0xffffffffULL);
    out.adj[a].emplace_back(b, sum);
    out.adj[b].emplace_back(a, sum);
    i = j;
  }
  return out;
}

}  // namespace

double modularity(const AttributedGraph& g, std::span<const NodeId> assignment,
                  double resolution) {
  if (resolution <= 0.0) throw ConfigError("resolution must be positive");
  if (assignment.size() != g.node_count()) {
    throw DataError("assignment length " + std::to_string(assignment.size()) +
                    " does not match node count " + std::to_string(g.node_count()));
  }
  const double m = static_cast<double>(g.edge_count());
  if (m < 1.0) throw DataError("modularity undefined for an edgeless graph");

  NodeId max_id = 0;
  for (NodeId c : assignment) {
    if (c >= g.node_count()) throw DataError("community id out of range");
    max_id = std::max(max_id, c);
  }
  std::vector<double> internal(max_id + 1, 0.0), degree_sum(max_id + 1, 0.0);
  for (const auto& [u, v] : g.edges()) {
    if (assignment[u] == assignment[v]) internal[assignment[u]] += 1.0;
  }
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    degree_sum[assignment[v]] += static_cast<double>(g.degree(static_cast<NodeId>(v)));
  }
  double q = 0.0;
  for (std::size_t c = 0; c <= max_id; ++c) {
    const double frac = degree_sum[c] / (2.0 * m);
    q += internal[c] / m - resolution * frac * frac;
  }
  return q;
}

Partition louvain(const AttributedGraph& g, double resolution, std::uint64_t seed) {
  if (resolution <= 0.0) throw ConfigError("resolution must be positive");
  Partition out;
  out.resolution = resolution;
  out.seed = seed;
  out.assignment.resize(g.node_count());
  std::iota(out.assignment.begin(), out.assignment.end(), NodeId{0});

  if (g.edge_count() == 0) {
    warn("louvain on an edgeless graph: singleton communities, Q = 0 by convention");
    out.modularity = 0.0;
    return out;
  }

  Rng rng(seed);
  const LevelGraph base = level_from_graph(g);
  double previous_q = modularity(g, out.assignment, resolution);
  double cycle_q = previous_q;

  // Outer cycle: a local-move phase at original-node granularity (seeded
  // from the current assignment), then the aggregation hierarchy above it.
  // Repeats while a full cycle still improves Q, which un-freezes nodes that
  // higher-level merges left on the wrong side.
  while (true) {
    const bool refined = local_move_phase(base, resolution, rng, out.assignment);
    if (refined) {
      compact_ids(out.assignment);
      const double q = modularity(g, out.assignment, resolution);
      out.pass_modularity.push_back(q);
      previous_q = q;
    }

    std::size_t k = 0;
    for (NodeId c : out.assignment) k = std::max<std::size_t>(k, c + 1);
    LevelGraph level = aggregate(base, out.assignment, k);
    std::vector<NodeId> to_level = out.assignment;
    while (true) {
      std::vector<NodeId> community(level.n);
      std::iota(community.begin(), community.end(), NodeId{0});
      if (!local_move_phase(level, resolution, rng, community)) break;

      const std::size_t merged = compact_ids(community);
      for (std::size_t v = 0; v < g.node_count(); ++v) {
        out.assignment[v] = community[to_level[v]];
      }
      const double q = modularity(g, out.assignment, resolution);
      out.pass_modularity.push_back(q);
      if (q - previous_q <= kMinGain) break;
      previous_q = q;

      level = aggregate(level, community, merged);
      for (std::size_t v = 0; v < g.node_count(); ++v) to_level[v] = out.assignment[v];
      if (merged == 1) break;
    }

    compact_ids(out.assignment);
    const double q = modularity(g, out.assignment, resolution);
    if (q - cycle_q <= kMinGain) break;
    cycle_q = q;
    previous_q = q;
  }

  out.modularity = modularity(g, out.assignment, resolution);
  return out;
}

PartitionStats partition_stats(const Partition& p) {
  PartitionStats stats;
  if (p.assignment.empty()) return stats;
  NodeId max_id = *std::max_element(p.assignment.begin(), p.assignment.end());
  std::vector<std::size_t> sizes(max_id + 1, 0);
  for (NodeId c : p.assignment) ++sizes[c];
  std::erase(sizes, std::size_t{0});
  std::sort(sizes.begin(), sizes.end());
  stats.community_count = sizes.size();
  stats.median_community_size = sizes[(sizes.size() - 1) / 2];
  return stats;
}

std::vector<std::vector<NodeId>> community_members(const Partition& p) {
  std::size_t k = 0;
  for (NodeId c : p.assignment) k = std::max<std::size_t>(k, c + 1);
  std::vector<std::vector<NodeId>> members(k);
  for (NodeId v = 0; v < p.assignment.size(); ++v) members[p.assignment[v]].push_back(v);
  return members;
}

std::string partition_to_string(const Partition& p) {
  std::size_t k = 0;
  for (NodeId c : p.assignment) k = std::max<std::size_t>(k, c + 1);
  std::string buffer = "partition " + std::to_string(p.assignment.size()) + ' ' +
                       std::to_string(k) + ' ' + format_double(p.resolution) + ' ' +
                       std::to_string(p.seed) + '\n';
  for (std::size_t v = 0; v < p.assignment.size(); ++v) {
    buffer += "c " + std::to_string(v) + ' ' + std::to_string(p.assignment[v]) + '\n';
  }
  return buffer;
}

Partition partition_from_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string token;
  if (!(in >> token) || token != "partition") throw DataError("expected 'partition' header");
  std::size_t n = 0, k = 0;
  Partition p;
  if (!(in >> n >> k >> p.resolution >> p.seed)) throw DataError("malformed partition header");
  p.assignment.assign(n, 0);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t node = 0, community = 0;
    if (!(in >> token >> node >> community) || token != "c") {
      throw DataError("malformed community line");
    }
    if (node >= n || community >= k) throw DataError("community line out of range");
    if (seen[node]) throw DataError("duplicate community line for node " + std::to_string(node));
    seen[node] = true;
    p.assignment[node] = static_cast<NodeId>(community);
  }
  return p;
}

void write_partition(const Partition& p, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << partition_to_string(p);
}

Partition read_partition(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return partition_from_string(buffer.str());
}

}  // namespace higgs
