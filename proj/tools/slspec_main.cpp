#include <iostream>

#include "slspec/cli.hpp"

int main(int argc, char** argv) { return slspec::run_cli(argc, argv, std::cout, std::cerr); }
