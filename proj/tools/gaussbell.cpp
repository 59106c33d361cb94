#include "gaussbell/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return gaussbell::cli::run(argc, argv, std::cout, std::cerr);
}
