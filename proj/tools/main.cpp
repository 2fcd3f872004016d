#include <iostream>

#include "betaflow/cli.hpp"

int main(int argc, char** argv) {
  return betaflow::run_cli(argc, argv, std::cout, std::cerr);
}
