#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace testsupport {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args, const emoarc::cli::Env& env = {}) {
  args.insert(args.begin(), "emoarc");
  std::ostringstream out, err;
  CliResult r;
  r.code = emoarc::cli::run(args, env, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace testsupport
