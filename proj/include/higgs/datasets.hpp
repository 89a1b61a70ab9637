#pragma once

#include <filesystem>

#include "higgs/graph.hpp"

namespace higgs {

/// Stochastic-block-model benchmark spec. Per graph the community count and
/// each community size are drawn uniformly from the inclusive ranges; every
/// intra pair connects with p_intra, every inter pair with p_inter. Block
/// assignments are recorded as node labels.
struct SbmSpec {
  std::size_t graph_count = 200;
  std::size_t communities_min = 2;
  std::size_t communities_max = 5;
  std::size_t community_size_min = 20;
  std::size_t community_size_max = 40;
  double p_intra = 0.3;
  double p_inter = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

GraphCorpus generate_sbm_corpus(const SbmSpec& spec);

/// Benchmark convention: first 128 train, next 32 val, last 40 test.
struct CorpusSplits {
  GraphCorpus train, val, test;
};
CorpusSplits split_corpus(const GraphCorpus& corpus, std::size_t train_count = 128,
                          std::size_t val_count = 32);

struct IngestReport {
  AttributedGraph graph;
  std::size_t raw_nodes = 0;
  std::size_t raw_edges = 0;       // after symmetrization/dedup, before LCC
  std::size_t skipped_rows = 0;    // rows referencing unknown ids
  std::size_t unlabeled_nodes = 0; // assigned the reserved "unknown" class
};

/// Cora citation ingestion: tab-separated content (id ... class) and cites
/// (cited citing). Citations are symmetrized to undirected edges and the
/// largest component is kept. The seven published class names are fixed.
IngestReport ingest_cora(const std::filesystem::path& content_path,
                         const std::filesystem::path& cites_path);

/// MUSAE page-page ingestion: edges CSV (id_1,id_2 header) and target CSV
/// whose last column is the page type. Duplicate rows collapse to one edge;
/// nodes missing from the target file get a reserved "unknown" class.
IngestReport ingest_facebook(const std::filesystem::path& edges_csv,
                             const std::filesystem::path& target_csv);

/// G(n, m): exactly m distinct edges, uniformly. Null baseline for the
/// evaluation harness.
AttributedGraph erdos_renyi_gnm(std::size_t node_count, std::size_t edge_count,
                                std::uint64_t seed);

}  // namespace higgs
