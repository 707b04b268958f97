#pragma once

// The mhls command-line front end. Exit codes: 0 success, 1 usage or I/O
// error, 2 a hard check failed.

#include <iosfwd>

namespace mhls::cli {

int run(int argc, const char* const* argv);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mhls::cli
