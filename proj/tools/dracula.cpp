#include <iostream>
#include <string>
#include <vector>

#include "dracula/cli.hpp"

int main(int argc, char** argv) {
  return dracula::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
