#include "higgs/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace higgs {

namespace {

// BFS distances from a source; unreachable nodes stay SIZE_MAX.
std::vector<std::size_t> bfs_distances(const AttributedGraph& g, NodeId source) {
  std::vector<std::size_t> dist(g.node_count(), static_cast<std::size_t>(-1));
  std::vector<NodeId> frontier{source};
  dist[source] = 0;
  std::size_t level = 0;
  while (!frontier.empty()) {
    std::vector<NodeId> next;
    ++level;
    for (NodeId v : frontier) {
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] == static_cast<std::size_t>(-1)) {
          dist[w] = level;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

std::size_t eccentricity_from(const AttributedGraph& g, NodeId source) {
  auto dist = bfs_distances(g, source);
  std::size_t ecc = 0;
  for (std::size_t d : dist) {
    if (d == static_cast<std::size_t>(-1)) {
      throw DataError("graph is disconnected; extract the largest component first");
    }
    ecc = std::max(ecc, d);
  }
  return ecc;
}

std::size_t triangles_at(const AttributedGraph& g, NodeId v) {
  std::size_t count = 0;
  const auto nv = g.neighbors(v);
  for (std::size_t i = 0; i < nv.size(); ++i) {
    for (std::size_t j = i + 1; j < nv.size(); ++j) {
      if (g.has_edge(nv[i], nv[j])) ++count;
    }
  }
  return count;
}

Histogram normalized(Histogram h, double total) {
  if (total > 0.0) {
    for (double& m : h.mass) m /= total;
  }
  return h;
}

std::size_t bin_of(double value, double lo, double hi, std::size_t bins) {
  if (value <= lo) return 0;
  if (value >= hi) return bins - 1;
  auto bin = static_cast<std::size_t>((value - lo) / (hi - lo) * static_cast<double>(bins));
  return std::min(bin, bins - 1);
}

double tv_distance(const Histogram& a, const Histogram& b) {
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.mass.size(); ++i) l1 += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * l1;
}

double mean_kernel(std::span<const Histogram> x, std::span<const Histogram> y, double sigma) {
  double sum = 0.0;
  for (const auto& a : x) {
    for (const auto& b : y) {
      const double tv = tv_distance(a, b);
      sum += std::exp(-tv * tv / (2.0 * sigma * sigma));
    }
  }
  return sum / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

}  // namespace

std::vector<double> local_clustering(const AttributedGraph& g) {
  std::vector<double> out(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::size_t d = g.degree(v);
    if (d < 2) continue;
    const double wedges = static_cast<double>(d) * static_cast<double>(d - 1) / 2.0;
    out[v] = static_cast<double>(triangles_at(g, v)) / wedges;
  }
  return out;
}

double transitivity(const AttributedGraph& g) {
  std::size_t triangle_ends = 0;  // sum over nodes of triangles at the node = 3 * triangles
  std::size_t wedges = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::size_t d = g.degree(v);
    wedges += d * (d - 1) / 2;
    triangle_ends += triangles_at(g, v);
  }
  if (wedges == 0) return 0.0;
  return static_cast<double>(triangle_ends) / static_cast<double>(wedges);
}

GraphStats graph_stats(const AttributedGraph& g, const MetricsConfig& config) {
  if (g.node_count() == 0) throw DataError("graph_stats of an empty graph");
  if (connected_components(g).size() > 1) {
    throw DataError("graph_stats requires a connected graph; extract the largest component first");
  }
  GraphStats stats;
  stats.nodes = g.node_count();
  stats.edges = g.edge_count();
  stats.density = g.density();

  const auto clustering = local_clustering(g);
  stats.clustering =
      std::accumulate(clustering.begin(), clustering.end(), 0.0) /
      static_cast<double>(g.node_count());
  stats.transitivity = transitivity(g);

  if (g.node_count() <= config.exact_diameter_threshold) {
    std::size_t diameter = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      diameter = std::max(diameter, eccentricity_from(g, v));
    }
    stats.diameter = diameter;
    stats.diameter_exact = true;
  } else {
    // Iterated double sweep: BFS from a seeded random source, then from the
    // farthest node found; the second sweep's depth bounds the diameter from
    // below and is exact on trees.
    Rng rng(config.seed);
    std::size_t best = 0;
    for (std::size_t round = 0; round < config.double_sweep_rounds; ++round) {
      const NodeId start = static_cast<NodeId>(rng.below(g.node_count()));
      auto dist = bfs_distances(g, start);
      NodeId far = start;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (dist[v] != static_cast<std::size_t>(-1) && dist[v] > dist[far]) far = v;
      }
      best = std::max(best, eccentricity_from(g, far));
    }
    stats.diameter = best;
    stats.diameter_exact = false;
  }

  if (g.edge_count() > 0) {
    const Partition partition = louvain(g, 1.0, config.seed);
    const PartitionStats ps = partition_stats(partition);
    stats.n_c = ps.community_count;
    stats.c_med = ps.median_community_size;
  } else {
    stats.n_c = g.node_count();
    stats.c_med = 1;
  }
  return stats;
}

Histogram degree_hist(const AttributedGraph& g, std::size_t max_degree) {
  std::size_t max_d = max_degree;
  for (NodeId v = 0; v < g.node_count(); ++v) max_d = std::max(max_d, g.degree(v));
  Histogram h;
  h.kind = Histogram::Kind::degree;
  h.lo = 0.0;
  h.hi = static_cast<double>(max_d + 1);
  h.bins = max_d + 1;
  h.mass.assign(h.bins, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) h.mass[g.degree(v)] += 1.0;
  return normalized(std::move(h), static_cast<double>(g.node_count()));
}

Histogram clustering_hist(const AttributedGraph& g, const MetricsConfig& config) {
  Histogram h;
  h.kind = Histogram::Kind::clustering;
  h.lo = 0.0;
  h.hi = 1.0;
  h.bins = config.clustering_bins;
  h.mass.assign(h.bins, 0.0);
  for (double c : local_clustering(g)) h.mass[bin_of(c, 0.0, 1.0, h.bins)] += 1.0;
  return normalized(std::move(h), static_cast<double>(g.node_count()));
}

std::vector<std::size_t> eccentricities(const AttributedGraph& g) {
  std::vector<std::size_t> out(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) out[v] = eccentricity_from(g, v);
  return out;
}

std::vector<std::size_t> sampled_eccentricities(const AttributedGraph& g,
                                                std::size_t sample_count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NodeId> sources(g.node_count());
  std::iota(sources.begin(), sources.end(), NodeId{0});
  rng.shuffle(sources);
  sources.resize(std::min(sample_count, sources.size()));
  std::vector<std::size_t> out;
  out.reserve(sources.size());
  for (NodeId v : sources) out.push_back(eccentricity_from(g, v));
  return out;
}

Histogram eccentricity_hist(const AttributedGraph& g, const MetricsConfig& config,
                            std::size_t max_eccentricity) {
  std::vector<std::size_t> values;
  bool approximate = false;
  if (g.node_count() <= config.exact_eccentricity_threshold) {
    values = eccentricities(g);
  } else {
    values = sampled_eccentricities(g, config.eccentricity_samples, config.seed);
    approximate = true;
  }
  std::size_t max_e = max_eccentricity;
  for (std::size_t e : values) max_e = std::max(max_e, e);
  Histogram h;
  h.kind = Histogram::Kind::eccentricity;
  h.lo = 0.0;
  h.hi = static_cast<double>(max_e + 1);
  h.bins = max_e + 1;
  h.mass.assign(h.bins, 0.0);
  for (std::size_t e : values) h.mass[e] += 1.0;
  h.approximate = approximate;
  return normalized(std::move(h), static_cast<double>(values.size()));
}

Histogram spectral_hist(const AttributedGraph& g, const MetricsConfig& config) {
  const AttributedGraph* target = &g;
  AttributedGraph sampled;
  bool approximate = false;
  if (g.node_count() > config.spectral_dense_limit) {
    Rng rng(config.seed);
    std::vector<NodeId> nodes(g.node_count());
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    rng.shuffle(nodes);
    nodes.resize(config.spectral_sample_nodes);
    sampled = largest_connected_component(induced_subgraph(g, nodes).graph).graph;
    target = &sampled;
    approximate = true;
  }

  const std::size_t n = target->node_count();
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(n));
  std::vector<double> inv_sqrt_degree(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t d = target->degree(v);
    if (d > 0) {
      inv_sqrt_degree[v] = 1.0 / std::sqrt(static_cast<double>(d));
      laplacian(v, v) = 1.0;
    }
  }
  for (const auto& [u, v] : target->edges()) {
    const double w = -inv_sqrt_degree[u] * inv_sqrt_degree[v];
    laplacian(u, v) = w;
    laplacian(v, u) = w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed");

  Histogram h;
  h.kind = Histogram::Kind::spectral;
  h.lo = 0.0;
  h.hi = 2.0;
  h.bins = config.spectral_bins;
  h.mass.assign(h.bins, 0.0);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    h.mass[bin_of(solver.eigenvalues()[i], 0.0, 2.0, h.bins)] += 1.0;
  }
  h.approximate = approximate;
  return normalized(std::move(h), static_cast<double>(n));
}

Histogram node_count_hist(std::size_t node_count, std::size_t max_node_count) {
  Histogram h;
  h.kind = Histogram::Kind::node_count;
  h.lo = 0.0;
  h.hi = static_cast<double>(max_node_count + 1);
  h.bins = max_node_count + 1;
  h.mass.assign(h.bins, 0.0);
  h.mass[std::min(node_count, max_node_count)] = 1.0;
  return h;
}

double mmd(std::span<const Histogram> a, std::span<const Histogram> b, double sigma) {
  if (a.empty() || b.empty()) throw DataError("mmd requires non-empty histogram lists");
  for (const auto& h : a) {
    if (!h.same_binning(a.front())) throw DataError("mmd: mixed binning within a list");
  }
  for (const auto& h : b) {
    if (!h.same_binning(a.front())) throw DataError("mmd: histogram binning mismatch");
  }
  const double value = mean_kernel(a, a, sigma) + mean_kernel(b, b, sigma) -
                       2.0 * mean_kernel(a, b, sigma);
  // The Gaussian-TV kernel of the graph-generation literature is not
  // strictly positive definite; tiny negative values are numerical noise.
  return std::max(0.0, value);
}

std::optional<double> MmdReport::score(const std::string& name) const {
  for (const auto& [key, value] : scores) {
    if (key == name) return value;
  }
  return std::nullopt;
}

MmdReport corpus_mmd(std::span<const AttributedGraph> real,
                     std::span<const AttributedGraph> generated,
                     const MetricsConfig& config) {
  if (real.empty() || generated.empty()) throw DataError("corpus_mmd on an empty corpus");
  MmdReport report;
  report.sigma = config.mmd_sigma;
  report.real_count = real.size();
  report.generated_count = generated.size();

  std::size_t max_degree = 0, max_ecc = 0, max_nodes = 0;
  for (const auto* corpus : {&real, &generated}) {
    for (const auto& g : *corpus) {
      max_nodes = std::max(max_nodes, g.node_count());
      for (NodeId v = 0; v < g.node_count(); ++v) max_degree = std::max(max_degree, g.degree(v));
    }
  }
  auto ecc_values = [&](const AttributedGraph& g) {
    return g.node_count() <= config.exact_eccentricity_threshold
               ? eccentricities(g)
               : sampled_eccentricities(g, config.eccentricity_samples, config.seed);
  };
  std::vector<std::vector<std::size_t>> real_ecc, gen_ecc;
  for (const auto& g : real) real_ecc.push_back(ecc_values(g));
  for (const auto& g : generated) gen_ecc.push_back(ecc_values(g));
  for (const auto& values : real_ecc) {
    for (std::size_t e : values) max_ecc = std::max(max_ecc, e);
  }
  for (const auto& values : gen_ecc) {
    for (std::size_t e : values) max_ecc = std::max(max_ecc, e);
  }

  auto ecc_hist_of = [&](const std::vector<std::size_t>& values, bool approx) {
    Histogram h;
    h.kind = Histogram::Kind::eccentricity;
    h.lo = 0.0;
    h.hi = static_cast<double>(max_ecc + 1);
    h.bins = max_ecc + 1;
    h.mass.assign(h.bins, 0.0);
    for (std::size_t e : values) h.mass[e] += 1.0;
    h.approximate = approx;
    return normalized(std::move(h), static_cast<double>(values.size()));
  };

  std::vector<Histogram> real_h, gen_h;
  auto run = [&](const std::string& name, auto&& build) {
    real_h.clear();
    gen_h.clear();
    for (std::size_t i = 0; i < real.size(); ++i) real_h.push_back(build(real[i], i, true));
    for (std::size_t i = 0; i < generated.size(); ++i) {
      gen_h.push_back(build(generated[i], i, false));
    }
    report.scores.emplace_back(name, mmd(real_h, gen_h, config.mmd_sigma));
  };

  if (real.size() > 1 && generated.size() > 1) {
    run("nodes", [&](const AttributedGraph& g, std::size_t, bool) {
      return node_count_hist(g.node_count(), max_nodes);
    });
  }
  run("degree", [&](const AttributedGraph& g, std::size_t, bool) {
    return degree_hist(g, max_degree);
  });
  run("clustering", [&](const AttributedGraph& g, std::size_t, bool) {
    return clustering_hist(g, config);
  });
  run("eccentricity", [&](const AttributedGraph&, std::size_t i, bool is_real) {
    const auto& values = is_real ? real_ecc[i] : gen_ecc[i];
    return ecc_hist_of(values, false);
  });
  if (real.size() > 1 && generated.size() > 1) {
    run("spectral", [&](const AttributedGraph& g, std::size_t, bool) {
      return spectral_hist(g, config);
    });
  }

  if (real.size() > 2 * generated.size() || generated.size() > 2 * real.size()) {
    report.notes.push_back("corpus sizes differ by more than 2x (" +
                           std::to_string(real.size()) + " vs " +
                           std::to_string(generated.size()) +
                           "); size-sensitive scores may be influenced");
  }
  bool any_sampled = false;
  for (const auto* corpus : {&real, &generated}) {
    for (const auto& g : *corpus) {
      if (g.node_count() > config.exact_eccentricity_threshold ||
          g.node_count() > config.spectral_dense_limit) {
        any_sampled = true;
      }
    }
  }
  if (any_sampled) {
    report.notes.push_back(
        "large graphs measured by seeded sampling: " +
        std::to_string(config.eccentricity_samples) + " eccentricity sources, " +
        std::to_string(config.spectral_sample_nodes) + "-node spectral subgraph, seed " +
        std::to_string(config.seed));
  }
  return report;
}

MmdReport community_eval(const AttributedGraph& real, const AttributedGraph& generated,
                         std::uint64_t seed, const MetricsConfig& config) {
  auto communities_of = [&](const AttributedGraph& g) {
    const Partition partition = louvain(g, 1.0, seed);
    std::vector<AttributedGraph> out;
    for (const auto& members : community_members(partition)) {
      if (members.size() < 5) continue;
      AttributedGraph community =
          largest_connected_component(induced_subgraph(g, members).graph).graph;
      if (community.node_count() >= 5) out.push_back(std::move(community));
    }
    return out;
  };
  const auto real_communities = communities_of(real);
  const auto generated_communities = communities_of(generated);
  if (real_communities.size() < 2 || generated_communities.size() < 2) {
    throw DataError("community_eval needs at least 2 communities of >= 5 nodes per side");
  }
  MetricsConfig community_config = config;
  community_config.seed = mix64(seed, 0x9e3779b9ULL);
  MmdReport report = corpus_mmd(real_communities, generated_communities, community_config);
  report.notes.push_back("communities: louvain resolution 1, seed " + std::to_string(seed) +
                         ", minimum size 5");
  return report;
}

std::vector<double> quantiles(std::vector<double> values, std::size_t q) {
  if (values.empty()) throw DataError("quantiles of an empty list");
  if (q < 2) throw ConfigError("quantile count must be >= 2");
  std::sort(values.begin(), values.end());
  std::vector<double> out(q);
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < q; ++i) {
    const double level = static_cast<double>(i) / static_cast<double>(q - 1);
    const double position = level * (n - 1.0);
    const std::size_t lower = static_cast<std::size_t>(position);
    const std::size_t upper = std::min<std::size_t>(lower + 1, values.size() - 1);
    const double frac = position - static_cast<double>(lower);
    out[i] = values[lower] * (1.0 - frac) + values[upper] * frac;
  }
  return out;
}

std::string qq_csv(std::span<const QqSeries> series, std::size_t q) {
  if (series.empty()) throw DataError("qq_csv needs at least one series");
  std::string header;
  std::vector<std::vector<double>> columns;
  for (const auto& s : series) {
    if (!header.empty()) header += ',';
    header += s.stat + "_quantiles_" + s.series;
    columns.push_back(quantiles(s.values, q));
  }
  std::string out = header + '\n';
  for (std::size_t row = 0; row < q; ++row) {
    for (std::size_t col = 0; col < columns.size(); ++col) {
      if (col) out += ',';
      out += format_double(columns[col][row]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace higgs
