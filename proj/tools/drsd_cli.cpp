#include <iostream>

#include "drsd/cli.hpp"

int main(int argc, char** argv) { return drsd::run_cli(argc, argv, std::cout, std::cerr); }
