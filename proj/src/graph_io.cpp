#include "higgs/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace higgs {

namespace {

std::string label_text(std::optional<LabelId> label) {
  return label.has_value() ? std::to_string(*label) : "-";
}

struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line_number = 0;

  bool next(std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    return true;
  }
};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw DataError("parse error at line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_int(std::string_view field, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    parse_fail(line, "expected integer, got '" + std::string(field) + "'");
  }
  return value;
}

std::optional<LabelId> parse_label(std::string_view field, std::size_t line) {
  if (field == "-") return std::nullopt;
  return parse_int<LabelId>(field, line);
}

// Parses one graph starting at the reader's current position. Returns false
// if only blank lines / stray comments remained.
bool parse_graph(LineReader& reader, AttributedGraph& out) {
  std::string_view line;
  std::size_t header_line = 0;
  std::size_t node_count = 0, edge_count = 0;
  std::optional<LabelId> graph_label;
  LabelVocab vocab;
  bool got_header = false;

  while (reader.next(line)) {
    if (line.empty()) {
      if (got_header) break;
      continue;
    }
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields[0] == "#") {
      if (got_header && fields.size() >= 3 && fields[1] == "label") {
        LabelId id = parse_int<LabelId>(fields[2], reader.line_number);
        std::string name;
        for (std::size_t i = 3; i < fields.size(); ++i) {
          if (!name.empty()) name += ' ';
          name += std::string(fields[i]);
        }
        vocab[id] = name;
      }
      continue;
    }
    if (fields[0].starts_with("#")) continue;
    if (!got_header) {
      if (fields[0] != "graph" || fields.size() != 4) {
        parse_fail(reader.line_number, "expected 'graph <nodes> <edges> <label|->'");
      }
      node_count = parse_int<std::size_t>(fields[1], reader.line_number);
      edge_count = parse_int<std::size_t>(fields[2], reader.line_number);
      graph_label = parse_label(fields[3], reader.line_number);
      header_line = reader.line_number;
      got_header = true;
      break;
    }
  }
  if (!got_header) return false;

  std::vector<std::optional<LabelId>> node_labels(node_count);
  std::vector<bool> node_seen(node_count, false);
  std::vector<NodePair> edges;
  std::vector<std::optional<LabelId>> edge_labels;
  edges.reserve(edge_count);

  while (reader.next(line)) {
    if (line.empty()) break;
    auto fields = split_fields(line);
    if (fields.empty()) break;
    if (fields[0] == "#" || fields[0].starts_with("#")) {
      if (fields.size() >= 3 && fields[1] == "label") {
        LabelId id = parse_int<LabelId>(fields[2], reader.line_number);
        std::string name;
        for (std::size_t i = 3; i < fields.size(); ++i) {
          if (!name.empty()) name += ' ';
          name += std::string(fields[i]);
        }
        vocab[id] = name;
      }
      continue;
    }
    if (fields[0] == "v") {
      if (fields.size() != 3) parse_fail(reader.line_number, "expected 'v <index> <label|->'");
      auto index = parse_int<NodeId>(fields[1], reader.line_number);
      if (index >= node_count) {
        parse_fail(reader.line_number, "node index " + std::to_string(index) +
                                           " >= declared node count " +
                                           std::to_string(node_count));
      }
      if (node_seen[index]) {
        parse_fail(reader.line_number, "duplicate node line for index " + std::to_string(index));
      }
      node_seen[index] = true;
      node_labels[index] = parse_label(fields[2], reader.line_number);
    } else if (fields[0] == "e") {
      if (fields.size() != 4) parse_fail(reader.line_number, "expected 'e <u> <v> <label|->'");
      auto u = parse_int<NodeId>(fields[1], reader.line_number);
      auto v = parse_int<NodeId>(fields[2], reader.line_number);
      if (u == v) parse_fail(reader.line_number, "self-loop at node " + std::to_string(u));
      if (u >= node_count || v >= node_count) {
        parse_fail(reader.line_number, "edge endpoint >= declared node count " +
                                           std::to_string(node_count));
      }
      if (u > v) parse_fail(reader.line_number, "edges must be written with u < v");
      edges.emplace_back(u, v);
      edge_labels.push_back(parse_label(fields[3], reader.line_number));
    } else {
      parse_fail(reader.line_number, "unknown record '" + std::string(fields[0]) + "'");
    }
  }

  if (edges.size() != edge_count) {
    parse_fail(header_line, "declared " + std::to_string(edge_count) + " edges but found " +
                                std::to_string(edges.size()));
  }

  std::size_t labeled_nodes = 0;
  for (const auto& l : node_labels) {
    if (l.has_value()) ++labeled_nodes;
  }
  if (labeled_nodes != 0 && labeled_nodes != node_count) {
    parse_fail(header_line, "node labels must be given for all nodes or none");
  }
  std::size_t labeled_edges = 0;
  for (const auto& l : edge_labels) {
    if (l.has_value()) ++labeled_edges;
  }
  if (labeled_edges != 0 && labeled_edges != edges.size()) {
    parse_fail(header_line, "edge labels must be given for all edges or none");
  }

  std::vector<LabelId> final_node_labels;
  if (labeled_nodes == node_count && node_count > 0) {
    final_node_labels.reserve(node_count);
    for (const auto& l : node_labels) final_node_labels.push_back(*l);
  }
  std::vector<LabelId> final_edge_labels;
  if (labeled_edges == edges.size() && !edges.empty()) {
    final_edge_labels.reserve(edges.size());
    for (const auto& l : edge_labels) final_edge_labels.push_back(*l);
  }

  out = AttributedGraph(node_count, std::move(edges), std::move(final_node_labels),
                        std::move(final_edge_labels), graph_label, std::move(vocab));
  return true;
}

void append_graph(std::string& buffer, const AttributedGraph& g) {
  buffer += "graph " + std::to_string(g.node_count()) + ' ' +
            std::to_string(g.edge_count()) + ' ' + label_text(g.graph_label()) + '\n';
  for (const auto& [id, name] : g.label_vocab()) {
    buffer += "# label " + std::to_string(id) + ' ' + name + '\n';
  }
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    buffer += "v " + std::to_string(v) + ' ';
    buffer += g.has_node_labels() ? std::to_string(g.node_label(static_cast<NodeId>(v))) : "-";
    buffer += '\n';
  }
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& [u, v] = g.edges()[e];
    buffer += "e " + std::to_string(u) + ' ' + std::to_string(v) + ' ';
    buffer += g.has_edge_labels() ? std::to_string(g.edge_labels()[e]) : "-";
    buffer += '\n';
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spill(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string graph_to_string(const AttributedGraph& g) {
  std::string buffer;
  append_graph(buffer, g);
  return buffer;
}

AttributedGraph graph_from_string(std::string_view text) {
  LineReader reader{text};
  AttributedGraph g;
  if (!parse_graph(reader, g)) throw DataError("no graph record found");
  return g;
}

void write_graph(const AttributedGraph& g, const std::filesystem::path& path) {
  spill(path, graph_to_string(g));
}

AttributedGraph read_graph(const std::filesystem::path& path) {
  try {
    return graph_from_string(slurp(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string corpus_to_string(const GraphCorpus& corpus) {
  std::string buffer;
  if (!corpus.provenance.empty()) buffer += "# provenance: " + corpus.provenance + '\n';
  buffer += "# split: " + split_name(corpus.split) + '\n';
  for (std::size_t i = 0; i < corpus.graphs.size(); ++i) {
    if (i > 0) buffer += '\n';
    append_graph(buffer, corpus.graphs[i]);
  }
  return buffer;
}

GraphCorpus corpus_from_string(std::string_view text) {
  GraphCorpus corpus;
  // Header comments, if present, precede the first graph record.
  LineReader header{text};
  std::string_view line;
  while (header.next(line)) {
    if (line.empty()) continue;
    if (!line.starts_with('#')) break;
    std::string_view rest = line.substr(1);
    auto strip = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
      return s;
    };
    rest = strip(rest);
    if (rest.starts_with("provenance:")) {
      corpus.provenance = std::string(strip(rest.substr(11)));
    } else if (rest.starts_with("split:")) {
      corpus.split = split_from_name(strip(rest.substr(6)));
    }
  }

  LineReader reader{text};
  AttributedGraph g;
  while (parse_graph(reader, g)) corpus.graphs.push_back(std::move(g));
  return corpus;
}

void write_corpus(const GraphCorpus& corpus, const std::filesystem::path& path) {
  spill(path, corpus_to_string(corpus));
}

GraphCorpus read_corpus(const std::filesystem::path& path) {
  try {
    return corpus_from_string(slurp(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::uint64_t graph_hash(const AttributedGraph& g) { return fnv1a64(graph_to_string(g)); }

}  // namespace higgs
