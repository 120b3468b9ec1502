#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace amrsumm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure inside one PENMAN expression; offset is a byte position into the
// expression text.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t byte_offset);
  std::size_t offset;
};

struct CorpusError : Error {
  using Error::Error;
};

// File cannot be opened, read, or written, or holds unparseable records.
struct IoError : Error {
  using Error::Error;
};

// Raised when no subgraph of the requested size exists.
struct InfeasibleError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

enum class NodeKind {
  variable,          // introduced as "(v / concept ...)"
  string_constant,   // "Joe"
  numeric_constant,  // 4, -3.5
  symbol_constant,   // -, +, imperative, ...
};

struct AmrNode {
  std::string var;            // unique within one graph; synthetic for constants
  std::string concept_label;  // non-empty
  NodeKind kind = NodeKind::variable;
  bool collapsed_name = false;  // set by collapse_fragments
  bool collapsed_date = false;
};

struct AmrEdge {
  std::string source;    // var
  std::string target;    // var
  std::string relation;  // forward label; "-of" inverses are normalized away
};

// One sentence's rooted, directed, acyclic, labeled graph.
struct AmrGraph {
  std::vector<AmrNode> nodes;
  std::vector<AmrEdge> edges;
  std::string root;

  int index_of(std::string_view var) const;  // -1 when absent
  const AmrNode* find(std::string_view var) const;
  std::vector<int> out_edges(std::string_view var) const;  // edge indices
  std::vector<int> in_edges(std::string_view var) const;
};

// Token span [start, end) aligned to a variable, 0-based.
struct Alignment {
  std::string var;
  int start = 0;
  int end = 0;
};

struct Sentence {
  std::vector<std::string> tokens;
  AmrGraph graph;
  std::vector<Alignment> alignments;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<Sentence> summary;  // gold summary sentences, possibly empty
};

}  // namespace amrsumm
