#include <iostream>

#include "treelog/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return treelog::run_cli(args, std::cout, std::cerr);
}
