#include "bandcov/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bandcov::cli::run(argc, argv, std::cout, std::cerr); }
