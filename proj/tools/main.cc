#include <iostream>

#include "cli.h"

int main(int argc, char** argv) {
  return gdalloc::cli::RunCli(argc, argv, std::cout, std::cerr);
}
