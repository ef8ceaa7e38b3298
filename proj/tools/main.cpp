#include "multihess/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return multihess::cli::run(argc, argv, std::cout, std::cerr); }
