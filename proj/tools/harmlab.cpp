#include <iostream>

#include "harmlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return harmlab::cli::run(args, std::cout, std::cerr);
}
