#include <iostream>

#include "padkit/cli.hpp"

int main(int argc, char** argv) { return padkit::run_cli(argc, argv, std::cout, std::cerr); }
