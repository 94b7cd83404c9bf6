#include <iostream>

#include "conlab/cli.hpp"

int main(int argc, char** argv) { return conlab::run_cli(argc, argv, std::cout, std::cerr); }
