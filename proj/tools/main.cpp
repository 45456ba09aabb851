#include <iostream>

#include "exactrank/cli.hpp"

int main(int argc, char** argv) { return exactrank::run_cli(argc, argv, std::cout, std::cerr); }
