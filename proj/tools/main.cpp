#include <iostream>
#include <string>
#include <vector>

#include "prodexp/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return prodexp::run(args, std::cout, std::cerr);
}
