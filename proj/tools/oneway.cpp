#include <iostream>

#include "oneway/cli.hpp"

int main(int argc, char** argv) { return oneway::cli::run(argc, argv, std::cout, std::cerr); }
