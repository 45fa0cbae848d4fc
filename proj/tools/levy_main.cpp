#include <iostream>

#include "levy/cli.hpp"

int main(int argc, char** argv) { return levy::run_cli(argc, argv, std::cout, std::cerr); }
