#include <iostream>
#include <string>
#include <vector>

#include "entropy_lab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return entropy_lab::cli::run(args, std::cout, std::cerr);
}
