#include <iostream>
#include <string>
#include <vector>

#include "mg1tail/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mg1tail::cli::run(args, std::cout, std::cerr);
}
