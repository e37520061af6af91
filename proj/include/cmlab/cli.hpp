#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cmlab::cli {

/// Runs one command line (args[0] is the program name).
///
/// Exit status 0 on success; 2 for usage and validation failures (unknown
/// flag, missing seed, bad point file, invalid values); 1 when a numerical
/// routine fails. Every failure prints one JSON object
/// {"error": {"code": ..., "message": ...}} to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Convenience wrapper over std::cout / std::cerr.
int run(int argc, const char* const* argv);

}  // namespace cmlab::cli
