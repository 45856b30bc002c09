#pragma once

#include <string>

namespace vflite::testsupport {

/// Shallow structural validation of DOT text: a named digraph, balanced
/// braces and brackets, terminated quoted strings, and every statement line
/// shaped like a node, an edge, an attribute, or a subgraph delimiter.
/// Returns an empty string when the text looks well-formed, else the first
/// complaint.
std::string checkDotSyntax(const std::string &dot);

} // namespace vflite::testsupport
