#include <iostream>
#include <string>
#include <vector>

#include "relgame_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return relgame::cli::run(args, std::cout, std::cerr);
}
