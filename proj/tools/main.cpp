#include <iostream>
#include <string>
#include <vector>

#include "circlerect/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return circlerect::run_cli(args, std::cout, std::cerr);
}
