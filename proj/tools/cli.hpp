#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gqi::cli {

// Exit codes: 0 success, 1 internal error or failed verification,
// 2 usage or domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gqi::cli
