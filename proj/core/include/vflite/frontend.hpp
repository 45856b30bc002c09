#pragma once

#include "vflite/ir.hpp"

#include <string_view>

namespace vflite {

/// Parse a program in the one-statement-per-line surface syntax.
///
/// Enforced while parsing:
///  * function names are unique, callees resolve, arity matches
///  * each variable has exactly one definition per function (params count)
///  * no self-referential copy (`x = x`)
///  * at most one `return` per function; the returned variable is defined
///    before the return line
///  * `phi` only at join points: immediately after an if/else, or after
///    another phi that already sits at one
///
/// Throws ParseError. An input with no functions is a valid empty program.
Program parseProgram(std::string_view text);

/// Canonical round-trip printer (4-space indent, one statement per line).
std::string printProgram(const Program &prog);

} // namespace vflite
