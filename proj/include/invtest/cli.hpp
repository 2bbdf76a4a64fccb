#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace invtest {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Entry point of the `invtest` command line. `args` excludes the program
/// name. Returns 0 on success, 2 for usage errors and 3 for data errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Plain-HTTP/HTTPS download used by `invtest fetch --allow-network`.
std::string http_get(const std::string& url);

}  // namespace invtest
