#include "amrsumm/amr.hpp"

namespace amrsumm {

ParseError::ParseError(const std::string& msg, std::size_t byte_offset)
    : Error(msg + " (byte " + std::to_string(byte_offset) + ")"), offset(byte_offset) {}

int AmrGraph::index_of(std::string_view var) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].var == var) return static_cast<int>(i);
  return -1;
}

const AmrNode* AmrGraph::find(std::string_view var) const {
  int i = index_of(var);
  return i < 0 ? nullptr : &nodes[i];
}

std::vector<int> AmrGraph::out_edges(std::string_view var) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].source == var) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> AmrGraph::in_edges(std::string_view var) const {
  std::vector<int> in;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].target == var) in.push_back(static_cast<int>(i));
  return in;
}

}  // namespace amrsumm
