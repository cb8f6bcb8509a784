#include "epsnet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return epsnet::cli::run(argc, argv, std::cout, std::cerr); }
