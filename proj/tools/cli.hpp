#pragma once

namespace vflite::cli {

/// Parse arguments, run the requested command, and return the process exit
/// code: 0 success, 1 usage, 2 input/analysis error, 3 a soundness cap was
/// hit, 4 the compared runs reported different flows.
int run(int argc, const char *const *argv);

} // namespace vflite::cli
