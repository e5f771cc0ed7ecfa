#include <string>
#include <vector>

#include "almab/experiments.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return almab::run_cli(args);
}
