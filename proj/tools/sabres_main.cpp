#include <string>
#include <vector>

#include "sabres/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sabres::cli::run_main(args);
}
