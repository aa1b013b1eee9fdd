#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return ratnorm::cli::run({argv, argv + argc}, std::cout, std::cerr);
}
