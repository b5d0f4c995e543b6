#include <iostream>

#include "it2fls/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return it2fls::cli::run(args, std::cout, std::cerr);
}
