#pragma once

#include <string>
#include <vector>

namespace epiloc::cli {

// Full command-line surface (simulate / estimate / localize / evaluate /
// bench / import). Returns the process exit code; never throws.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace epiloc::cli
