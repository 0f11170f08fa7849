#include <iostream>

#include "gve/cli.hpp"

int main(int argc, char** argv) {
  return gve::cli::run(argc, argv, std::cout, std::cerr);
}
