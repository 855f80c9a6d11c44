#include <iostream>

#include "invh/cli.hpp"

int main(int argc, char** argv) {
  return invh::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
