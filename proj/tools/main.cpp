#include <iostream>

#include "cbcdbd/cli.hpp"

int main(int argc, char** argv) {
  return cbcdbd::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
