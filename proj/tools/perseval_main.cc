#include <iostream>
#include <string>
#include <vector>

#include "perseval/cli/commands.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return perseval::cli::run_cli(args, std::cout, std::cerr);
}
