#pragma once

#include <iosfwd>

namespace vne {

/// Runs one `vne` subcommand. Returns 0 on success, 1 on usage errors and 2 on
/// runtime errors; diagnostics go to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace vne
