#include "bingham_dg/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bdg::run_cli(argc, argv, std::cout, std::cerr); }
