#include <iostream>
#include <string>
#include <vector>

#include "qberry/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return qberry::cli::dispatch(args, std::cout, std::cerr);
}
