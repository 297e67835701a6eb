#include <vector>

#include "acutefq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return acutefq::cli::run(args);
}
