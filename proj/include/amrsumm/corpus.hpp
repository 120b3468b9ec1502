#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "amrsumm/amr.hpp"

namespace amrsumm {

// Corpus file format (UTF-8 text):
//
//   # ::doc <id>
//   # ::snt <tokens space-separated>
//   # ::align <var> <start>-<end>     (zero or more)
//   <one PENMAN expression, possibly spanning lines>
//   <blank line>
//   ...
//   # ::summary
//   <summary sentence blocks, same layout>
//
// Documents appear in file order. Malformed blocks raise CorpusError naming
// the document id and line number.
std::vector<Document> load_corpus(const std::string& path);
std::vector<Document> parse_corpus(std::istream& in, const std::string& name);

std::string serialize_corpus(const std::vector<Document>& docs);

}  // namespace amrsumm
