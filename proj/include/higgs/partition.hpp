#pragma once

#include <filesystem>
#include <vector>

#include "higgs/graph.hpp"

namespace higgs {

struct Partition {
  std::vector<NodeId> assignment;       // node -> community id, dense 0..k-1
  double resolution = 1.0;
  double modularity = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> pass_modularity;  // Q after each pass, non-decreasing
};

/// Generalized modularity Q = sum_c [ L_c/m - resolution * (d_c / 2m)^2 ].
/// Accepts any assignment with ids < node_count; requires at least one edge.
double modularity(const AttributedGraph& g, std::span<const NodeId> assignment,
                  double resolution);

/// Two-phase Louvain with seeded random visit order. Local moves accept the
/// first strictly improving neighbor community (gain > 1e-12); levels repeat
/// until a pass stops improving Q. Isolated nodes stay singletons; an
/// edgeless graph partitions into singletons with Q = 0 by convention.
Partition louvain(const AttributedGraph& g, double resolution, std::uint64_t seed);

struct PartitionStats {
  std::size_t community_count = 0;
  std::size_t median_community_size = 0;  // lower median for even counts
};

PartitionStats partition_stats(const Partition& p);

std::vector<std::vector<NodeId>> community_members(const Partition& p);

// Text form: `partition <n> <k> <resolution> <seed>` then `c <node> <community>`.
std::string partition_to_string(const Partition& p);
Partition partition_from_string(std::string_view text);
void write_partition(const Partition& p, const std::filesystem::path& path);
Partition read_partition(const std::filesystem::path& path);

}  // namespace higgs
