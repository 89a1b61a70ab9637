#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "higgs/graph.hpp"

namespace higgs {

// Native text format (UTF-8, LF):
//   graph <node_count> <edge_count> <graph_label|->
//   # label <id> <name>          vocabulary entries, ascending id
//   v <index> <node_label|->     one line per node, ascending index
//   e <u> <v> <edge_label|->     u < v, ascending lexicographic
// Lines starting with '#' are comments; recognized metadata comments are
// written back canonically, everything else is ignored. A corpus file is a
// sequence of graphs separated by blank lines, optionally preceded by
// '# provenance: ...' and '# split: ...' header comments.

std::string graph_to_string(const AttributedGraph& g);
AttributedGraph graph_from_string(std::string_view text);

void write_graph(const AttributedGraph& g, const std::filesystem::path& path);
AttributedGraph read_graph(const std::filesystem::path& path);

std::string corpus_to_string(const GraphCorpus& corpus);
GraphCorpus corpus_from_string(std::string_view text);

void write_corpus(const GraphCorpus& corpus, const std::filesystem::path& path);
GraphCorpus read_corpus(const std::filesystem::path& path);

// Canonical-serialization hash, used to fingerprint dataset sources.
std::uint64_t graph_hash(const AttributedGraph& g);

}  // namespace higgs
