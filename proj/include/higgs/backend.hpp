#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>

#include "higgs/hier.hpp"

namespace higgs {

/// Frozen/free region contract for cross-edge sampling: all intra-left and
/// intra-right pairs are frozen, only the left x right bipartite block may
/// receive edges.
struct PairMask {
  std::size_t left_size = 0;
  std::size_t right_size = 0;

  std::size_t free_region_size() const { return left_size * right_size; }
};

/// Throws unless every pair has one endpoint per side of the mask. Applied
/// to every backend's output regardless of implementation.
void validate_cross_edges(const PairMask& mask, std::span<const NodePair> cross_edges);

struct ClassStats {
  std::vector<std::size_t> sizes;                   // empirical community sizes
  std::map<LabelId, std::size_t> label_counts;      // within-community mixture
  std::map<std::size_t, std::size_t> degree_counts; // empirical degree multiset
};

struct PairDensityStats {
  double mean = 0.0;      // of |cross| / (n_left * n_right)
  double variance = 0.0;
  std::size_t count = 0;
};

struct H2Stats {
  std::vector<std::size_t> node_counts;
  std::map<LabelId, std::size_t> class_counts;
  // (a, b) with a <= b -> (adjacent pair observations, total pair observations)
  std::map<std::pair<LabelId, LabelId>, std::pair<std::size_t, std::size_t>> pair_adjacency;
};

/// Empirical per-class model standing in for trained conditional generators:
/// size/label/degree distributions per class, cross-edge density per class
/// pair, and template-level statistics.
struct ClassConditionedModel {
  std::map<LabelId, ClassStats> classes;
  std::map<std::pair<LabelId, LabelId>, PairDensityStats> pair_density;
  H2Stats h2;
  LabelVocab vocab;
};

ClassConditionedModel fit_statistical(const HierarchicalDataset& dataset);

/// Chung-Lu sample conditioned on a class: node weights are resampled from
/// the class degree multiset, pair {i,j} connects with min(1, w_i w_j / W),
/// labels follow the class mixture and are minimally adjusted until the
/// majority class equals the condition. size_hint = 0 draws the size from
/// the class size distribution.
AttributedGraph sample_h1_statistical(const ClassConditionedModel& model, LabelId condition,
                                      std::size_t size_hint, std::uint64_t seed);

/// Uniformly chosen training community of the class, rewired by
/// ceil(rewire_fraction * |E|) degree-preserving double-edge swap attempts
/// (swaps that would create duplicates or self-loops are rejected).
AttributedGraph sample_h1_empirical(const HierarchicalDataset& dataset, LabelId condition,
                                    std::uint64_t seed, double rewire_fraction);

/// Template sample: node count and per-node classes from the fitted
/// distributions, class-pair edges by their fitted probabilities, size hints
/// from the class size distributions. Resampled until connected (bounded
/// retries, then the largest component with a warning).
H2Template sample_h2(const ClassConditionedModel& model, std::uint64_t seed);

/// Masked cross-edge sample: the edge count follows a clamped normal around
/// the fitted class-pair density times n_l * n_r (never below 1), endpoints
/// are drawn proportionally to degree + 1 on each side, pairs without
/// replacement. Unknown class pairs fall back to the global mean density
/// with a warning. Only free-region (cross) pairs are ever produced.
std::vector<NodePair> sample_cross_edges_masked(const ClassConditionedModel& model,
                                                const AttributedGraph& left,
                                                const AttributedGraph& right,
                                                std::optional<LabelId> condition,
                                                std::uint64_t seed);

/// Pluggable three-stage generator contract.
class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual void fit(const HierarchicalDataset& dataset) = 0;
  virtual H2Template sample_h2(std::uint64_t seed) const = 0;
  virtual AttributedGraph sample_h1(LabelId condition, std::size_t size_hint,
                                    std::uint64_t seed) const = 0;
  virtual std::vector<NodePair> sample_cross_edges(const AttributedGraph& left,
                                                   const AttributedGraph& right,
                                                   std::optional<LabelId> condition,
                                                   std::uint64_t seed) const = 0;
  virtual std::string name() const = 0;
};

class StatisticalBackend final : public GeneratorBackend {
 public:
  StatisticalBackend() = default;
  explicit StatisticalBackend(ClassConditionedModel model) : model_(std::move(model)) {}

  void fit(const HierarchicalDataset& dataset) override { model_ = fit_statistical(dataset); }
  H2Template sample_h2(std::uint64_t seed) const override;
  AttributedGraph sample_h1(LabelId condition, std::size_t size_hint,
                            std::uint64_t seed) const override;
  std::vector<NodePair> sample_cross_edges(const AttributedGraph& left,
                                           const AttributedGraph& right,
                                           std::optional<LabelId> condition,
                                           std::uint64_t seed) const override;
  std::string name() const override { return "statistical"; }

  const ClassConditionedModel& model() const { return model_; }
  void set_model(ClassConditionedModel model) { model_ = std::move(model); }

 private:
  ClassConditionedModel model_;
};

/// Memorization-avoiding baseline: resamples training communities with
/// degree-preserving rewiring; templates and cross edges reuse the fitted
/// statistics.
class EmpiricalBackend final : public GeneratorBackend {
 public:
  explicit EmpiricalBackend(double rewire_fraction = 0.3)
      : rewire_fraction_(rewire_fraction) {}

  void fit(const HierarchicalDataset& dataset) override;
  H2Template sample_h2(std::uint64_t seed) const override;
  AttributedGraph sample_h1(LabelId condition, std::size_t size_hint,
                            std::uint64_t seed) const override;
  std::vector<NodePair> sample_cross_edges(const AttributedGraph& left,
                                           const AttributedGraph& right,
                                           std::optional<LabelId> condition,
                                           std::uint64_t seed) const override;
  std::string name() const override { return "empirical"; }

  const ClassConditionedModel& model() const { return model_; }
  void set_model(ClassConditionedModel model) { model_ = std::move(model); }
  void set_dataset(HierarchicalDataset dataset) { dataset_ = std::move(dataset); }

 private:
  double rewire_fraction_;
  ClassConditionedModel model_;
  HierarchicalDataset dataset_;
};

/// Backend by configured name: "statistical" or "empirical".
std::unique_ptr<GeneratorBackend> make_backend(const std::string& name,
                                               double rewire_fraction = 0.3);

// Versioned key=value + table text file with explicit distribution lists.
std::string model_to_string(const ClassConditionedModel& model);
ClassConditionedModel model_from_string(std::string_view text);
void write_model(const ClassConditionedModel& model, const std::filesystem::path& path);
ClassConditionedModel read_model(const std::filesystem::path& path);

}  // namespace higgs
