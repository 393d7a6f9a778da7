#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twinobs {

/// Exit status: 0 success, 1 a verification failed, 2 bad input. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace twinobs
