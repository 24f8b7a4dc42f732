#pragma once

#include <string>
#include <vector>

namespace soliton::cli {

// Exit codes: 0 success, 2 no root bracket, 3 residual/boundary gate failed,
// 64 usage error, 65 malformed input file, 70 internal error.
int run(const std::vector<std::string>& args);

} // namespace soliton::cli
