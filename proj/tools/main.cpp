#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::ios::sync_with_stdio(false);
  const int code = cfmmarb::cli::run_cli(args, std::cout, std::cerr);
  std::cout.flush();
  if (!std::cout) return cfmmarb::cli::kIo;
  return code;
}
