#include <iostream>

#include "aperiodic/cli.hpp"

int main(int argc, char** argv) { return aperiodic::cli::run(argc, argv, std::cout, std::cerr); }
