#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "higgs/backend.hpp"
#include "higgs/metrics.hpp"

namespace higgs {

struct PipelineConfig {
  std::string backend = "statistical";
  double resolution = 2.0;
  std::size_t repeats = 32;  // segmentation repeats for single large sources
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
  std::size_t max_h1_size = 500;  // memory guard on community samples
  std::string size_hint_mode = "hint";  // hint | model
  double rewire_fraction = 0.3;
  std::size_t sample_count = 40;
  double mmd_sigma = 1.0;
  std::size_t qq_points = 100;
  bool eval_whole = true;
  bool eval_community = true;
  bool eval_qq = true;
  std::size_t exact_diameter_threshold = 2000;
  std::filesystem::path out_dir = "out";
  std::map<std::string, std::filesystem::path> paths;  // corpus, cora_content, ...

  void validate() const;
  MetricsConfig metrics() const;
};

PipelineConfig config_from_string(std::string_view text);
PipelineConfig read_config(const std::filesystem::path& path);
std::string config_to_string(const PipelineConfig& cfg);
std::uint64_t config_hash(const PipelineConfig& cfg);

/// Runs fn(0..job_count) on a bounded pool; output ordering is the caller's
/// responsibility (jobs write results by index). The first exception wins
/// and is rethrown after all workers drain.
void parallel_for(std::size_t job_count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

struct H1JobRecord {
  std::uint64_t seed = 0;
  LabelId condition = 0;
  std::size_t size_hint = 0;
  std::size_t size = 0;
  bool retried = false;
  double duration_ms = 0.0;
};

struct CrossJobRecord {
  std::uint64_t seed = 0;
  NodeId h2_u = 0;
  NodeId h2_v = 0;
  std::size_t pair_size = 0;  // |left| + |right|
  std::vector<NodePair> edges;
  double duration_ms = 0.0;
};

struct SampleTrace {
  H2Template h2;
  std::vector<H1JobRecord> h1_jobs;        // one per h2 node
  std::vector<CrossJobRecord> cross_jobs;  // one per h2 edge
  std::vector<NodeId> offsets;
  std::size_t duplicate_cross_edges = 0;
  std::size_t assembled_nodes = 0;
  bool lcc_trimmed = false;
  std::size_t peak_pair_size = 0;
  double stage1_ms = 0.0;
  double stage2_ms = 0.0;
  double stage3_ms = 0.0;
  double assembly_ms = 0.0;
};

/// Three-stage sample: template, conditioned community jobs, masked
/// cross-edge jobs, deterministic assembly. Jobs run on the worker pool with
/// seeds derived as mix64(sample_seed, stage, index), so the result is
/// bit-identical for any worker count. Disconnected assemblies are reduced
/// to their largest component with a warning.
std::pair<AttributedGraph, SampleTrace> sample_graph(const PipelineConfig& cfg,
                                                     const GeneratorBackend& backend,
                                                     std::uint64_t sample_seed);

/// Verifies that every assembled edge is either internal to one community
/// block or recorded by the stage-three job of exactly its template edge.
/// Throws on any violation. Only meaningful when the assembly was not
/// LCC-trimmed.
void check_edge_provenance(const AttributedGraph& assembled, const SampleTrace& trace);

struct ExperimentResult {
  std::filesystem::path out_dir;
  std::vector<std::string> stats_rows;  // row labels, in table order
  MmdReport whole_mmd_higgs;
  MmdReport whole_mmd_bter;
  std::optional<MmdReport> whole_mmd_er;
  std::optional<MmdReport> community_higgs;
  std::optional<MmdReport> community_bter;
  std::vector<AttributedGraph> generated;  // the sampled graphs
};

/// name: sbm | cora | facebook. Builds the hierarchy from the configured
/// dataset paths, fits the backend, samples (40 graphs for sbm, one large
/// graph otherwise), fits and samples the degree/clustering baseline on the
/// same targets, runs the evaluation suite and writes the table-shaped TSVs,
/// QQ CSVs and a manifest into out_dir.
ExperimentResult run_experiment(const std::string& name, const PipelineConfig& cfg);

struct ScalingReport {
  std::size_t size_cap = 0;
  std::size_t h2_nodes = 0;
  std::size_t h2_edges = 0;
  std::size_t output_nodes = 0;
  std::size_t output_edges = 0;
  std::size_t max_h1_size = 0;
  std::size_t peak_pair_size = 0;  // must stay <= 2 * max_h1_size
  double stage1_ms = 0.0;
  double stage2_ms = 0.0;
  double stage3_ms = 0.0;
  double assembly_ms = 0.0;
};

/// Synthetic backend with community sizes capped at size_cap and a template
/// of about size_cap nodes, demonstrating the quadratic extension of the
/// backend's size limit. Records per-stage wall clock and the peak pair size
/// seen by stage three.
ScalingReport scaling_probe(std::size_t size_cap, const PipelineConfig& cfg);

/// Synthetic fitted model used by the probe (exposed for tests).
ClassConditionedModel synthetic_scaling_model(std::size_t size_cap);

void write_manifest(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                    const std::string& command);

}  // namespace higgs
