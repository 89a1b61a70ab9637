#pragma once

// Format-faithful stand-ins for the published ingestion datasets, generated
// with the published aggregate counts so the ingestion paths can be checked
// end to end without network access. Real files, when available through the
// HIGGS_CORA_CONTENT / HIGGS_CORA_CITES / HIGGS_FACEBOOK_EDGES /
// HIGGS_FACEBOOK_TARGETS environment variables, take precedence.

#include <filesystem>
#include <string>

namespace fixtures {

struct CoraPaths {
  std::filesystem::path content;
  std::filesystem::path cites;
  bool synthetic = true;
};

struct FacebookPaths {
  std::filesystem::path edges;
  std::filesystem::path targets;
  bool synthetic = true;
};

// Citation-network files whose symmetrized largest component has exactly
// 2810 nodes and 7981 edges (plus satellite components trimmed by LCC
// extraction).
CoraPaths cora_files(const std::filesystem::path& dir);

// Page-page CSV files describing a connected graph of exactly 22470 nodes
// and 171002 deduplicated edges over the four published page types.
FacebookPaths facebook_files(const std::filesystem::path& dir);

}  // namespace fixtures
