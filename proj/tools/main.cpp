#include <iostream>

#include "eaforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return eaforge::run(args, std::cout, std::cerr);
}
