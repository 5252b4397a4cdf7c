#include <iostream>
#include <string>
#include <vector>

#include "mvmimic/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mvmimic::cli::run(args, std::cout, std::cerr);
}
