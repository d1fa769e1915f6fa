#include <iostream>

#include "cwave/cli.hpp"

int main(int argc, char** argv) { return cwave::run_cli(argc, argv, std::cout, std::cerr); }
