#include <iostream>

#include "contactline/cli.hpp"

int main(int argc, char** argv) {
  return contactline::cli::run(argc, argv, std::cout, std::cerr);
}
