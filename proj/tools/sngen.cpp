#include <string>
#include <vector>

#include "sngen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sngen::cli::dispatch(args);
}
