#include "higgs/bter.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "higgs/metrics.hpp"

namespace higgs {

std::size_t BterParams::node_count() const {
  std::size_t n = 0;
  for (const auto& [d, count] : degree_counts) n += count;
  return n;
}

BterParams fit_bter(const AttributedGraph& g) {
  if (g.edge_count() == 0) throw DataError("fit_bter requires at least one edge");
  const std::vector<double> clustering = local_clustering(g);
  BterParams params;
  std::map<std::size_t, double> clustering_sum;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::size_t d = g.degree(v);
    if (d == 0) continue;
    ++params.degree_counts[d];
    clustering_sum[d] += clustering[v];
  }
  for (const auto& [d, count] : params.degree_counts) {
    params.clustering_by_degree[d] =
        d <= 1 ? 0.0 : clustering_sum[d] / static_cast<double>(count);
  }
  return params;
}

BterSample sample_bter(const BterParams& params, std::uint64_t seed) {
  if (params.degree_counts.empty()) throw DataError("sample_bter: empty degree counts");
  std::size_t n = 0;
  std::vector<std::size_t> target_degree;
  for (const auto& [d, count] : params.degree_counts) {
    if (d == 0) throw DataError("sample_bter: degree 0 entry in degree counts");
    n += count;
    target_degree.insert(target_degree.end(), count, d);
  }
  // Map iteration is ascending by degree, so target_degree is sorted.

  Rng rng(seed);
  auto clustering_of = [&](std::size_t d) {
    auto it = params.clustering_by_degree.find(d);
    return it == params.clustering_by_degree.end() ? 0.0 : std::clamp(it->second, 0.0, 1.0);
  };

  std::unordered_set<std::uint64_t> edge_keys;
  std::vector<NodePair> edges;
  auto key_of = [](NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
  };

  // Phase 1: affinity blocks over nodes of degree >= 2.
  BterSample sample;
  std::vector<double> excess(n, 0.0);
  std::size_t block_start = 0;
  while (block_start < n && target_degree[block_start] == 1) {
    excess[block_start] = 1.0;
    ++block_start;
  }
  while (block_start < n) {
    const std::size_t nominal_degree = target_degree[block_start];
    const std::size_t block_size = std::min(nominal_degree + 1, n - block_start);
    const double rho = std::cbrt(clustering_of(nominal_degree));
    for (std::size_t i = 0; i < block_size; ++i) {
      const std::size_t v = block_start + i;
      // Expected in-block degree is rho * (block_size - 1); the rest of the
      // target spills into phase 2.
      excess[v] = std::max(
          0.0, static_cast<double>(target_degree[v]) -
                   rho * static_cast<double>(block_size - 1));
      for (std::size_t j = i + 1; j < block_size; ++j) {
        if (rng.bernoulli(rho)) {
          const NodeId a = static_cast<NodeId>(v), b = static_cast<NodeId>(block_start + j);
          edge_keys.insert(key_of(a, b));
          edges.emplace_back(a, b);
          ++sample.phase1_edges;
        }
      }
    }
    block_start += block_size;
  }

  // Phase 2: Chung-Lu on excess weights, collisions retried then dropped.
  double total_excess = 0.0;
  for (double w : excess) total_excess += w;
  if (total_excess > 0.0) {
    std::vector<double> cumulative(n);
    double acc = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      acc += excess[v];
      cumulative[v] = acc;
    }
    auto weighted_node = [&]() {
      const double target = rng.uniform() * total_excess;
      return static_cast<NodeId>(
          std::lower_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin());
    };
    constexpr int kCollisionRetries = 3;
    for (NodeId u = 0; u < n; ++u) {
      if (excess[u] <= 0.0) continue;
      for (NodeId v = u + 1; v < n; ++v) {
        const double p = std::min(1.0, excess[u] * excess[v] / total_excess);
        if (p <= 0.0 || !rng.bernoulli(p)) continue;
        NodeId a = u, b = v;
        bool placed = false;
        for (int attempt = 0; attempt <= kCollisionRetries; ++attempt) {
          if (a != b && !edge_keys.count(key_of(a, b))) {
            edge_keys.insert(key_of(a, b));
            edges.emplace_back(std::min(a, b), std::max(a, b));
            ++sample.phase2_edges;
            placed = true;
            break;
          }
          b = weighted_node();
        }
        if (!placed) ++sample.dropped_collisions;
      }
    }
  }

  if (sample.dropped_collisions > 0) {
    warn("bter: dropped " + std::to_string(sample.dropped_collisions) +
         " colliding phase-2 edge(s); sampled graph is short that many edges");
  }
  sample.graph = AttributedGraph(n, std::move(edges));
  return sample;
}

}  // namespace higgs
