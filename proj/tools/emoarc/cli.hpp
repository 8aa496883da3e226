#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace emoarc::cli {

using Env = std::map<std::string, std::string>;

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kBackend = 3 };

// argv[0] is the program name. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& argv, const Env& env, std::ostream& out, std::ostream& err);

Env environment_from(char** envp);

}  // namespace emoarc::cli
