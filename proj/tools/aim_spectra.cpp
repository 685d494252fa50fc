#include <iostream>

#include "aimspec/cli.hpp"

int main(int argc, char** argv) { return aimspec::run_cli(argc, argv, std::cout, std::cerr); }
