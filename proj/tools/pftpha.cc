#include <iostream>

#include "pftpha/cli.h"

int main(int argc, char** argv) {
  return pftpha::cli::run(argc, argv, std::cout, std::cerr);
}
