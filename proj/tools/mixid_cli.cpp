#include <iostream>
#include <string>
#include <vector>

#include "mixid/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mixid::run_cli(args, std::cout, std::cerr);
}
