#include <iostream>

#include "ecs/cli.hpp"

int main(int argc, char** argv) {
  return ecs::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
