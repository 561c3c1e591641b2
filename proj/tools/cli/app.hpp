#pragma once

#include <iosfwd>

namespace pqc::cli {

/// Parses arguments, runs one subcommand and returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pqc::cli
