#include "fracstab/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return fracstab::run_cli(argc, argv, std::cout, std::cerr);
}
