#include "stlf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return stlf::cli::run(argc, argv, std::cout, std::cerr); }
