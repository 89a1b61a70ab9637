#include "higgs/backend.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "higgs/graph_io.hpp"

namespace higgs {

namespace {

constexpr std::size_t kH2ConnectRetries = 64;
constexpr double kEndpointEpsilon = 1.0;  // degree smoothing for endpoint picks

std::pair<LabelId, LabelId> pair_key(LabelId a, LabelId b) {
  return {std::min(a, b), std::max(a, b)};
}

const ClassStats& class_stats_or_throw(const ClassConditionedModel& model, LabelId condition) {
  auto it = model.classes.find(condition);
  if (it == model.classes.end()) {
    throw DataError("unknown condition class " + std::to_string(condition));
  }
  return it->second;
}

template <typename Map>
typename Map::key_type pick_from_counts(const Map& counts, Rng& rng) {
  std::size_t total = 0;
  for (const auto& [key, count] : counts) total += count;
  std::uint64_t target = rng.below(total);
  for (const auto& [key, count] : counts) {
    if (target < count) return key;
    target -= count;
  }
  return counts.rbegin()->first;
}

}  // namespace

void validate_cross_edges(const PairMask& mask, std::span<const NodePair> cross_edges) {
  for (const auto& [u, v] : cross_edges) {
    if (u >= mask.left_size || v >= mask.right_size) {
      throw DataError("cross edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") escapes the free region of a " + std::to_string(mask.left_size) + "x" +
                      std::to_string(mask.right_size) + " mask");
    }
  }
}

ClassConditionedModel fit_statistical(const HierarchicalDataset& dataset) {
  ClassConditionedModel model;

  for (const auto& sample : dataset.h1_samples) {
    ClassStats& stats = model.classes[sample.condition];
    stats.sizes.push_back(sample.graph.node_count());
    for (LabelId label : sample.graph.node_labels()) ++stats.label_counts[label];
    for (NodeId v = 0; v < sample.graph.node_count(); ++v) {
      ++stats.degree_counts[sample.graph.degree(v)];
    }
  }

  for (const auto& pair : dataset.pair_samples) {
    const LabelId a = majority_label(pair.left);
    const LabelId b = majority_label(pair.right);
    PairDensityStats& stats = model.pair_density[pair_key(a, b)];
    const double density = static_cast<double>(pair.cross_edges.size()) /
                           (static_cast<double>(pair.left.node_count()) *
                            static_cast<double>(pair.right.node_count()));
    // Streaming mean/M2 (Welford).
    ++stats.count;
    const double delta = density - stats.mean;
    stats.mean += delta / static_cast<double>(stats.count);
    stats.variance += delta * (density - stats.mean);
  }
  for (auto& [key, stats] : model.pair_density) {
    stats.variance = stats.count > 1 ? stats.variance / static_cast<double>(stats.count - 1) : 0.0;
  }

  for (const auto& tpl : dataset.h2_samples) {
    model.h2.node_counts.push_back(tpl.graph.node_count());
    for (LabelId label : tpl.graph.node_labels()) ++model.h2.class_counts[label];
    for (NodeId u = 0; u < tpl.graph.node_count(); ++u) {
      for (NodeId v = u + 1; v < tpl.graph.node_count(); ++v) {
        auto key = pair_key(tpl.graph.node_label(u), tpl.graph.node_label(v));
        auto& [adjacent, total] = model.h2.pair_adjacency[key];
        ++total;
        if (tpl.graph.has_edge(u, v)) ++adjacent;
      }
    }
    for (const auto& [id, name] : tpl.graph.label_vocab()) model.vocab[id] = name;
  }

  for (const auto& [label, count] : model.h2.class_counts) {
    auto it = model.classes.find(label);
    if (it == model.classes.end() || it->second.sizes.empty()) {
      throw DataError("no community samples for class " + std::to_string(label) +
                      " appearing in templates");
    }
  }
  return model;
}

AttributedGraph sample_h1_statistical(const ClassConditionedModel& model, LabelId condition,
                                      std::size_t size_hint, std::uint64_t seed) {
  const ClassStats& stats = class_stats_or_throw(model, condition);
  Rng rng(seed);
  const std::size_t n =
      size_hint > 0 ? size_hint : stats.sizes[rng.below(stats.sizes.size())];

  std::vector<double> weights(n);
  double total_weight = 0.0;
  for (auto& w : weights) {
    w = static_cast<double>(pick_from_counts(stats.degree_counts, rng));
    total_weight += w;
  }
  std::vector<NodePair> edges;
  if (total_weight > 0.0) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        const double p = std::min(1.0, weights[u] * weights[v] / total_weight);
        if (rng.bernoulli(p)) edges.emplace_back(u, v);
      }
    }
  }

  std::vector<LabelId> labels(n);
  std::vector<std::size_t> counts;
  std::vector<LabelId> ids;
  for (const auto& [label, count] : stats.label_counts) {
    ids.push_back(label);
    counts.push_back(count);
  }
  std::map<LabelId, std::size_t> tally;
  for (auto& label : labels) {
    std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    std::uint64_t target = rng.below(total);
    std::size_t pick = 0;
    while (target >= counts[pick]) target -= counts[pick++];
    label = ids[pick];
    ++tally[label];
  }
  // Minimal adjustment: flip nodes of the strongest rival class until the
  // majority (smallest id wins ties) is the condition.
  auto majority_of = [&]() {
    LabelId best = tally.begin()->first;
    std::size_t best_count = tally.begin()->second;
    for (const auto& [label, count] : tally) {
      if (count > best_count) {
        best = label;
        best_count = count;
      }
    }
    return best;
  };
  tally.emplace(condition, 0);
  while (majority_of() != condition) {
    const LabelId rival = majority_of();
    for (auto& label : labels) {
      if (label == rival) {
        label = condition;
        --tally[rival];
        ++tally[condition];
        break;
      }
    }
  }

  return AttributedGraph(n, std::move(edges), std::move(labels), {}, std::nullopt, model.vocab);
}

AttributedGraph sample_h1_empirical(const HierarchicalDataset& dataset, LabelId condition,
                                    std::uint64_t seed, double rewire_fraction) {
  if (rewire_fraction < 0.0) throw ConfigError("rewire_fraction must be >= 0");
  std::vector<const H1Sample*> pool;
  for (const auto& sample : dataset.h1_samples) {
    if (sample.condition == condition) pool.push_back(&sample);
  }
  if (pool.empty()) throw DataError("unknown condition class " + std::to_string(condition));
  Rng rng(seed);
  const AttributedGraph& source = pool[rng.below(pool.size())]->graph;
  if (rewire_fraction == 0.0 || source.edge_count() < 2) return source;

  std::vector<NodePair> edges = source.edges();
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(edges.size() * 2);
  auto key_of = [](NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
  };
  for (const auto& [u, v] : edges) keys.insert(key_of(u, v));

  const std::size_t attempts =
      static_cast<std::size_t>(std::ceil(rewire_fraction * static_cast<double>(edges.size())));
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    const std::size_t i = rng.below(edges.size());
    std::size_t j = rng.below(edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (rng.bernoulli(0.5)) std::swap(c, d);
    // proposed: (a, d) and (c, b)
    if (a == d || c == b) continue;
    if (a == c || b == d) continue;
    if (keys.count(key_of(a, d)) || keys.count(key_of(c, b))) continue;
    keys.erase(key_of(a, b));
    keys.erase(key_of(c, d));
    keys.insert(key_of(a, d));
    keys.insert(key_of(c, b));
    edges[i] = {std::min(a, d), std::max(a, d)};
    edges[j] = {std::min(c, b), std::max(c, b)};
  }

  return AttributedGraph(source.node_count(), std::move(edges), source.node_labels(), {},
                         source.graph_label(), source.label_vocab());
}

H2Template sample_h2(const ClassConditionedModel& model, std::uint64_t seed) {
  if (model.h2.node_counts.empty()) throw DataError("model has no template statistics");
  Rng rng(seed);

  for (std::size_t attempt = 0; attempt <= kH2ConnectRetries; ++attempt) {
    const std::size_t n = model.h2.node_counts[rng.below(model.h2.node_counts.size())];
    std::vector<LabelId> labels(n);
    for (auto& label : labels) label = pick_from_counts(model.h2.class_counts, rng);

    std::vector<NodePair> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        auto it = model.h2.pair_adjacency.find(pair_key(labels[u], labels[v]));
        double p = 0.0;
        if (it != model.h2.pair_adjacency.end() && it->second.second > 0) {
          p = static_cast<double>(it->second.first) / static_cast<double>(it->second.second);
        }
        if (rng.bernoulli(p)) edges.emplace_back(u, v);
      }
    }
    AttributedGraph graph(n, std::move(edges), std::move(labels), {}, std::nullopt, model.vocab);

    const bool connected = connected_components(graph).size() <= 1;
    if (!connected && attempt < kH2ConnectRetries) continue;

    if (!connected) {
      IndexedSubgraph lcc = largest_connected_component(graph);
      if (lcc.graph.node_count() < 2) {
        throw DataError("template sampling failed to produce a usable connected graph");
      }
      warn("template disconnected after " + std::to_string(kH2ConnectRetries) +
           " retries; using its largest component");
      graph = std::move(lcc.graph);
    }

    H2Template tpl;
    tpl.node_size_hints.resize(graph.node_count());
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      const ClassStats& stats = class_stats_or_throw(model, graph.node_label(v));
      tpl.node_size_hints[v] = stats.sizes[rng.below(stats.sizes.size())];
    }
    tpl.graph = std::move(graph);
    return tpl;
  }
  throw DataError("unreachable: template retry loop exhausted");
}

std::vector<NodePair> sample_cross_edges_masked(const ClassConditionedModel& model,
                                                const AttributedGraph& left,
                                                const AttributedGraph& right,
                                                std::optional<LabelId> condition,
                                                std::uint64_t seed) {
  (void)condition;  // edge-condition channel is plumbed but off by default
  if (left.node_count() == 0 || right.node_count() == 0) {
    throw DataError("cross-edge sampling needs non-empty sides");
  }
  const PairMask mask{left.node_count(), right.node_count()};

  const LabelId a = majority_label(left);
  const LabelId b = majority_label(right);
  double mean = 0.0, variance = 0.0;
  auto it = model.pair_density.find(pair_key(a, b));
  if (it != model.pair_density.end()) {
    mean = it->second.mean;
    variance = it->second.variance;
  } else {
    // Fall back to the density pooled over every fitted class pair.
    std::size_t total = 0;
    for (const auto& [key, stats] : model.pair_density) {
      mean += stats.mean * static_cast<double>(stats.count);
      total += stats.count;
    }
    if (total == 0) throw DataError("model has no cross-edge density statistics");
    mean /= static_cast<double>(total);
    warn("no density statistics for class pair (" + std::to_string(a) + ", " +
         std::to_string(b) + "); falling back to the global mean");
  }

  Rng rng(seed);
  const double pairs = static_cast<double>(mask.free_region_size());
  const double raw = rng.normal(mean * pairs, std::sqrt(variance) * pairs);
  std::size_t k = raw < 1.0 ? 1 : static_cast<std::size_t>(std::llround(raw));
  k = std::min(k, mask.free_region_size());
  k = std::max<std::size_t>(k, 1);

  std::vector<double> left_weights(left.node_count()), right_weights(right.node_count());
  for (NodeId v = 0; v < left.node_count(); ++v) {
    left_weights[v] = static_cast<double>(left.degree(v)) + kEndpointEpsilon;
  }
  for (NodeId v = 0; v < right.node_count(); ++v) {
    right_weights[v] = static_cast<double>(right.degree(v)) + kEndpointEpsilon;
  }

  std::vector<NodePair> out;
  out.reserve(k);
  std::unordered_set<std::uint64_t> used;
  used.reserve(k * 2);
  std::size_t misses = 0;
  const std::size_t miss_budget = 20 * k + 100;
  while (out.size() < k && misses < miss_budget) {
    const NodeId u = static_cast<NodeId>(rng.pick_weighted(left_weights));
    const NodeId v = static_cast<NodeId>(rng.pick_weighted(right_weights));
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (used.insert(key).second) {
      out.emplace_back(u, v);
    } else {
      ++misses;
    }
  }
  if (out.size() < k) {
    // Rejection stalled (free region nearly saturated): take the remaining
    // pairs in deterministic scan order.
    for (NodeId u = 0; u < left.node_count() && out.size() < k; ++u) {
      for (NodeId v = 0; v < right.node_count() && out.size() < k; ++v) {
        const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
        if (used.insert(key).second) out.emplace_back(u, v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  validate_cross_edges(mask, out);
  return out;
}

H2Template StatisticalBackend::sample_h2(std::uint64_t seed) const {
  return higgs::sample_h2(model_, seed);
}

AttributedGraph StatisticalBackend::sample_h1(LabelId condition, std::size_t size_hint,
                                              std::uint64_t seed) const {
  return sample_h1_statistical(model_, condition, size_hint, seed);
}

std::vector<NodePair> StatisticalBackend::sample_cross_edges(const AttributedGraph& left,
                                                             const AttributedGraph& right,
                                                             std::optional<LabelId> condition,
                                                             std::uint64_t seed) const {
  return sample_cross_edges_masked(model_, left, right, condition, seed);
}

void EmpiricalBackend::fit(const HierarchicalDataset& dataset) {
  model_ = fit_statistical(dataset);
  dataset_ = dataset;
}

H2Template EmpiricalBackend::sample_h2(std::uint64_t seed) const {
  return higgs::sample_h2(model_, seed);
}

AttributedGraph EmpiricalBackend::sample_h1(LabelId condition, std::size_t size_hint,
                                            std::uint64_t seed) const {
  (void)size_hint;  // resampled communities keep their training size
  return sample_h1_empirical(dataset_, condition, seed, rewire_fraction_);
}

std::vector<NodePair> EmpiricalBackend::sample_cross_edges(const AttributedGraph& left,
                                                           const AttributedGraph& right,
                                                           std::optional<LabelId> condition,
                                                           std::uint64_t seed) const {
  return sample_cross_edges_masked(model_, left, right, condition, seed);
}

std::unique_ptr<GeneratorBackend> make_backend(const std::string& name,
                                               double rewire_fraction) {
  if (name == "statistical") return std::make_unique<StatisticalBackend>();
  if (name == "empirical") return std::make_unique<EmpiricalBackend>(rewire_fraction);
  throw ConfigError("unknown backend '" + name + "' (expected statistical or empirical)");
}

namespace {

constexpr int kModelFormatVersion = 1;

template <typename K>
std::string counts_to_text(const std::map<K, std::size_t>& counts) {
  std::string out;
  for (const auto& [key, count] : counts) {
    out += ' ' + std::to_string(key) + ':' + std::to_string(count);
  }
  return out;
}

template <typename K>
void counts_from_text(std::istringstream& in, std::map<K, std::size_t>& counts) {
  std::string token;
  while (in >> token) {
    auto colon = token.find(':');
    if (colon == std::string::npos) throw DataError("malformed count entry '" + token + "'");
    counts[static_cast<K>(std::stoll(token.substr(0, colon)))] =
        std::stoull(token.substr(colon + 1));
  }
}

}  // namespace

std::string model_to_string(const ClassConditionedModel& model) {
  std::string out = "model statistical " + std::to_string(kModelFormatVersion) + '\n';
  for (const auto& [id, name] : model.vocab) {
    out += "vocab " + std::to_string(id) + ' ' + name + '\n';
  }
  for (const auto& [label, stats] : model.classes) {
    out += "class " + std::to_string(label) + " sizes";
    for (std::size_t size : stats.sizes) out += ' ' + std::to_string(size);
    out += '\n';
    out += "class " + std::to_string(label) + " labels" + counts_to_text(stats.label_counts) +
           '\n';
    out += "class " + std::to_string(label) + " degrees" + counts_to_text(stats.degree_counts) +
           '\n';
  }
  for (const auto& [key, stats] : model.pair_density) {
    out += "pair " + std::to_string(key.first) + ' ' + std::to_string(key.second) + ' ' +
           format_double(stats.mean) + ' ' + format_double(stats.variance) + ' ' +
           std::to_string(stats.count) + '\n';
  }
  out += "h2 sizes";
  for (std::size_t size : model.h2.node_counts) out += ' ' + std::to_string(size);
  out += '\n';
  out += "h2 classes" + counts_to_text(model.h2.class_counts) + '\n';
  for (const auto& [key, counts] : model.h2.pair_adjacency) {
    out += "h2pair " + std::to_string(key.first) + ' ' + std::to_string(key.second) + ' ' +
           std::to_string(counts.first) + ' ' + std::to_string(counts.second) + '\n';
  }
  return out;
}

ClassConditionedModel model_from_string(std::string_view text) {
  ClassConditionedModel model;
  std::istringstream lines{std::string(text)};
  std::string line;
  bool got_header = false;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string record;
    in >> record;
    if (!got_header) {
      std::string kind;
      int version = 0;
      if (record != "model" || !(in >> kind >> version) || version != kModelFormatVersion) {
        throw DataError("unsupported model file header: " + line);
      }
      got_header = true;
      continue;
    }
    if (record == "vocab") {
      LabelId id;
      in >> id;
      std::string name, token;
      while (in >> token) {
        if (!name.empty()) name += ' ';
        name += token;
      }
      model.vocab[id] = name;
    } else if (record == "class") {
      LabelId label;
      std::string field;
      in >> label >> field;
      ClassStats& stats = model.classes[label];
      if (field == "sizes") {
        std::size_t size;
        while (in >> size) stats.sizes.push_back(size);
      } else if (field == "labels") {
        counts_from_text(in, stats.label_counts);
      } else if (field == "degrees") {
        counts_from_text(in, stats.degree_counts);
      } else {
        throw DataError("unknown class field '" + field + "'");
      }
    } else if (record == "pair") {
      LabelId a, b;
      PairDensityStats stats;
      if (!(in >> a >> b >> stats.mean >> stats.variance >> stats.count)) {
        throw DataError("malformed pair line: " + line);
      }
      model.pair_density[{a, b}] = stats;
    } else if (record == "h2") {
      std::string field;
      in >> field;
      if (field == "sizes") {
        std::size_t size;
        while (in >> size) model.h2.node_counts.push_back(size);
      } else if (field == "classes") {
        counts_from_text(in, model.h2.class_counts);
      } else {
        throw DataError("unknown h2 field '" + field + "'");
      }
    } else if (record == "h2pair") {
      LabelId a, b;
      std::size_t adjacent, total;
      if (!(in >> a >> b >> adjacent >> total)) {
        throw DataError("malformed h2pair line: " + line);
      }
      model.h2.pair_adjacency[{a, b}] = {adjacent, total};
    } else {
      throw DataError("unknown model record '" + record + "'");
    }
  }
  if (!got_header) throw DataError("missing model header");
  return model;
}

void write_model(const ClassConditionedModel& model, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << model_to_string(model);
}

ClassConditionedModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_string(buffer.str());
}

}  // namespace higgs
