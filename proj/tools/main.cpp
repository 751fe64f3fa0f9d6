#include <iostream>

#include "rnc/cli.hpp"

int main(int argc, char** argv) { return rnc::run_cli(argc, argv, std::cout, std::cerr); }
