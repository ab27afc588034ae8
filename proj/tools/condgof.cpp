// condgof: conditional goodness-of-fit tests for count data.

#include <iostream>

#include "condgof/cli.hpp"

int main(int argc, char** argv) { return condgof::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
