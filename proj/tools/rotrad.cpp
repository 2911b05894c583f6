#include <iostream>

#include "rotrad/cli.hpp"

int main(int argc, char** argv) { return rotrad::cli::run(argc, argv, std::cout, std::cerr); }
