#include <iostream>

#include "dagmm/cli.hpp"

int main(int argc, char** argv) { return dagmm::run_cli(argc, argv, std::cout, std::cerr); }
