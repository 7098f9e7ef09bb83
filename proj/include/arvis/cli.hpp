#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arvis {

// Exit codes: 0 success, 1 domain failure (defects found, no detection),
// 2 usage or I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arvis
