#pragma once

#include <map>

#include "higgs/graph.hpp"

namespace higgs {

/// Degree histogram plus per-degree mean local clustering of a target graph.
/// Degree-0 nodes are not represented; c_1 is treated as 0.
struct BterParams {
  std::map<std::size_t, std::size_t> degree_counts;     // d >= 1 -> n_d
  std::map<std::size_t, double> clustering_by_degree;   // d -> mean c_d in [0, 1]

  std::size_t node_count() const;
};

BterParams fit_bter(const AttributedGraph& g);

struct BterSample {
  AttributedGraph graph;
  std::size_t phase1_edges = 0;
  std::size_t phase2_edges = 0;
  std::size_t dropped_collisions = 0;  // phase-2 proposals lost to existing edges
};

/// Two-phase construction. Phase 1: nodes sorted by target degree (degree-1
/// nodes excluded) are chunked into blocks of d+1 where d is the degree of
/// the block's first node; each block is Erdos-Renyi with rho = c_d^(1/3).
/// Phase 2: Chung-Lu on excess weights max(0, d_i - rho * (block - 1));
/// degree-1 nodes carry their full degree. Collisions with existing edges
/// are retried a bounded number of times, then dropped and tallied.
BterSample sample_bter(const BterParams& params, std::uint64_t seed);

}  // namespace higgs
