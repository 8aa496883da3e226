#include <iostream>

#include "cli.hpp"

extern char** environ;

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv, argv + argc);
  return emoarc::cli::run(args, emoarc::cli::environment_from(environ), std::cout, std::cerr);
}
