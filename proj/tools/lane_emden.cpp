#include <iostream>

#include "lane_emden/cli.hpp"

int main(int argc, char** argv) {
  return lane_emden::run_cli(argc, argv, std::cout, std::cerr);
}
