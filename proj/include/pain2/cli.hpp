// Command-line surface: verify / integrate / recover / catalog.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pain2 {

// args excludes the program name. Returns the process exit code:
// 0 success / all checks pass, 1 failed checks or runtime error, 2 usage.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pain2
