#include <iostream>

#include "qcsp/cli.hpp"

int main(int argc, char** argv) {
  return qcsp::cli::run(argc, argv, std::cout, std::cerr);
}
