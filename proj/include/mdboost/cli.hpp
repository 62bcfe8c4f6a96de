#pragma once

namespace mdboost::cli {

/// Runs one subcommand. Returns 0 on success, 1 on usage errors and 2 on
/// data or computation errors. Diagnostics go to stderr.
int dispatch(int argc, const char* const* argv);

} // namespace mdboost::cli
