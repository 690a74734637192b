#include <iostream>
#include <string>
#include <vector>

#include "bnkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return bnkit::run_cli(args, std::cout, std::cerr);
}
