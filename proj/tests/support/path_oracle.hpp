#pragma once

#include "vflite/pdg.hpp"

#include <optional>

namespace vflite::testsupport {

/// Context-sensitive reachability by brute force: explore every path from
/// the starts, simulating the parenthesis stack step by step, and accept a
/// step only when the label string stays free of mismatched parentheses —
/// returns out of the starting context first, then calls into new contexts,
/// matched pairs anywhere. Walks backward when `fwd` is false (the mirror
/// rule). The graph must be acyclic. Returns nullopt when the state space
/// exceeds `maxStates`.
std::optional<DynBitset> cflOracleVertices(const Pdg &pdg,
                                           const std::vector<VertexId> &starts,
                                           bool fwd,
                                           std::size_t maxStates = 500'000);

/// Same exploration, collecting the data edges traversable on some valid
/// path instead of the vertices reached.
std::optional<DynBitset> cflOracleEdges(const Pdg &pdg,
                                        const std::vector<VertexId> &starts,
                                        bool fwd,
                                        std::size_t maxStates = 500'000);

} // namespace vflite::testsupport
