#include <iostream>

#include "hfo/cli.hpp"

int main(int argc, char** argv) {
  return hfo::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
