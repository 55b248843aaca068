#include <iostream>

#include "robinopt/cli.hpp"

int main(int argc, char** argv) { return robinopt::cli::run(argc, argv, std::cout, std::cerr); }
