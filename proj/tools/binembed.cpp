#include <iostream>
#include <string>
#include <vector>

#include "binembed/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return binembed::cli_main(args, std::cout, std::cerr);
}
