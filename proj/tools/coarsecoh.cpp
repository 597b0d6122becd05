// coarsecoh: coarse cohomology of finite metric models
#include "coarse/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return coarse::cli_run(std::move(args));
}
