#pragma once

#include <string>
#include <string_view>

#include "amrsumm/amr.hpp"

namespace amrsumm {

// Parses one PENMAN expression. One node per variable introduction,
// reentrant bare-variable references become extra edges, constants become
// leaf nodes with synthetic variables, and inverse ":rel-of" relations are
// normalized to forward edges with endpoints swapped. The result is
// validated: rooted (every node connected to the root) and acyclic after
// normalization.
AmrGraph parse_penman(std::string_view text);

// Deterministic inverse of parse_penman up to variable renaming. Children
// are ordered by relation label, then target concept, then target variable.
// Inverse "-of" relations are re-introduced only where the spanning
// traversal walks an edge against its direction. Throws on cyclic input.
std::string serialize_penman(const AmrGraph& g);

}  // namespace amrsumm
