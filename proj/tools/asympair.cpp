#include <iostream>

#include "asympair/cli.hpp"

int main(int argc, char** argv) { return asympair::run_cli(argc, argv, std::cout, std::cerr); }
