#pragma once

#include <optional>
#include <string>
#include <vector>

#include "higgs/graph.hpp"
#include "higgs/partition.hpp"

namespace higgs {

struct MetricsConfig {
  std::size_t exact_diameter_threshold = 2000;
  std::size_t exact_eccentricity_threshold = 2000;
  std::size_t eccentricity_samples = 500;
  std::size_t double_sweep_rounds = 20;
  std::size_t spectral_dense_limit = 500;
  std::size_t spectral_sample_nodes = 500;
  std::size_t clustering_bins = 100;
  std::size_t spectral_bins = 200;
  double mmd_sigma = 1.0;
  std::uint64_t seed = 1;
};

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t diameter = 0;
  bool diameter_exact = true;  // false: iterated double-sweep lower bound
  double clustering = 0.0;     // mean local clustering
  double density = 0.0;
  double transitivity = 0.0;
  std::size_t n_c = 0;         // Louvain gamma=1 community count
  std::size_t c_med = 0;       // median community size (lower median)
};

/// Per-node local clustering coefficients (0 for degree < 2).
std::vector<double> local_clustering(const AttributedGraph& g);

/// 3 * triangles / connected triples.
double transitivity(const AttributedGraph& g);

/// Aggregate statistics of a connected graph. Exact all-pairs diameter up to
/// the threshold, otherwise an iterated double-sweep lower bound (flagged).
GraphStats graph_stats(const AttributedGraph& g, const MetricsConfig& config = {});

struct Histogram {
  enum class Kind { degree, clustering, eccentricity, spectral, node_count };
  Kind kind = Kind::degree;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 0;
  std::vector<double> mass;   // normalized
  bool approximate = false;   // sampled rather than exhaustive

  bool same_binning(const Histogram& other) const {
    return kind == other.kind && lo == other.lo && hi == other.hi && bins == other.bins;
  }
};

/// Integer-bin degree histogram. max_degree extends the binning so corpora
/// can share it; 0 uses the graph's own maximum.
Histogram degree_hist(const AttributedGraph& g, std::size_t max_degree = 0);

/// 100 bins on [0, 1] by default.
Histogram clustering_hist(const AttributedGraph& g, const MetricsConfig& config = {});

/// Exact BFS eccentricities up to the threshold, otherwise from seeded
/// sample sources (flagged). max_eccentricity extends the shared binning.
Histogram eccentricity_hist(const AttributedGraph& g, const MetricsConfig& config = {},
                            std::size_t max_eccentricity = 0);

/// Symmetric normalized Laplacian spectrum, 200 bins on [0, 2]. Dense solve
/// up to the limit, otherwise on the LCC of a seeded uniform node-induced
/// subgraph (flagged).
Histogram spectral_hist(const AttributedGraph& g, const MetricsConfig& config = {});

/// Point mass at the graph's node count over shared integer-width bins.
Histogram node_count_hist(std::size_t node_count, std::size_t max_node_count);

/// Per-node eccentricities (exact). Helper for QQ exports.
std::vector<std::size_t> eccentricities(const AttributedGraph& g);
std::vector<std::size_t> sampled_eccentricities(const AttributedGraph& g,
                                                std::size_t sample_count, std::uint64_t seed);

/// Biased (V-statistic) squared MMD with the Gaussian-TV kernel
/// k(x, y) = exp(-TV(x, y)^2 / (2 sigma^2)); TV is half the L1 distance
/// between normalized histograms. Lists must share binning.
double mmd(std::span<const Histogram> a, std::span<const Histogram> b, double sigma = 1.0);

struct MmdReport {
  // statistic name -> squared MMD; keys among nodes/degree/clustering/
  // eccentricity/spectral.
  std::vector<std::pair<std::string, double>> scores;
  double sigma = 1.0;
  std::string kernel = "gaussian-tv";
  std::size_t real_count = 0;
  std::size_t generated_count = 0;
  std::vector<std::string> notes;

  std::optional<double> score(const std::string& name) const;
};

/// Whole-corpus MMD over the five per-graph statistics (node count included
/// only when both corpora have more than one graph).
MmdReport corpus_mmd(std::span<const AttributedGraph> real,
                     std::span<const AttributedGraph> generated,
                     const MetricsConfig& config = {});

/// Community-resampling evaluation: Louvain at gamma=1 on both graphs, the
/// largest component of every community with at least 5 nodes forms the two
/// corpora, then corpus_mmd. Requires at least 2 qualifying communities per
/// side.
MmdReport community_eval(const AttributedGraph& real, const AttributedGraph& generated,
                         std::uint64_t seed, const MetricsConfig& config = {});

/// q evenly spaced quantiles (linear interpolation, levels i/(q-1)).
std::vector<double> quantiles(std::vector<double> values, std::size_t q);

struct QqSeries {
  std::string stat;                     // e.g. "Degree"
  std::string series;                   // e.g. "real", "higgs", "bter"
  std::vector<double> values;
};

/// CSV with one `<Stat>_quantiles_<series>` column per entry.
std::string qq_csv(std::span<const QqSeries> series, std::size_t q);

}  // namespace higgs
