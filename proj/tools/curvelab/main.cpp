#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return curvelab::cli::run_command(argc, argv, std::cout, std::cerr);
}
