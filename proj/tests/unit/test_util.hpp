#pragma once

#include "vflite/pdg.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef VFLITE_CORPUS_DIR
#define VFLITE_CORPUS_DIR "tests/corpus"
#endif

namespace vflite::testsupport {

inline std::string corpusPath(const std::string &name) {
  return std::string(VFLITE_CORPUS_DIR) + "/" + name;
}

inline std::string readCorpus(const std::string &name) {
  std::ifstream in(corpusPath(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Ascending display names of a vertex-id bitset — the shape every frozen
/// set expectation is written in.
inline std::vector<std::string> displayNames(const DynBitset &bits,
                                             const Pdg &pdg) {
  std::vector<std::string> out;
  for (VertexId v : bits.toVector())
    out.push_back(pdg.display(v));
  return out;
}

inline std::vector<std::string> displayNames(const std::vector<VertexId> &ids,
                                             const Pdg &pdg) {
  std::vector<std::string> out;
  for (VertexId v : ids)
    out.push_back(pdg.display(v));
  return out;
}

inline std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace vflite::testsupport
