#include <iostream>
#include <string>
#include <vector>

#include "wavewall/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return wavewall::cli_dispatch(args, std::cin, std::cout, std::cerr);
}
