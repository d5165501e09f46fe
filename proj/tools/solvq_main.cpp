#include <iostream>
#include <string>
#include <vector>

#include "solvq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return solvq::cli::run(args, std::cout, std::cerr);
}
