#include <string>
#include <vector>

#include "gwsrank/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gwsrank::cli_main(args);
}
