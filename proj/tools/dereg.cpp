#include <iostream>

#include "dereg/cli.hpp"

int main(int argc, char** argv) { return dereg::cli::run(argc, argv, std::cout, std::cerr); }
