#include <iostream>

#include "sgep/cli.hpp"

int main(int argc, char** argv) {
  return sgep::cli::run(argc, argv, std::cout, std::cerr);
}
