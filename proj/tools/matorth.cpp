#include <iostream>

#include "matorth_cli.hpp"

int main(int argc, char** argv) { return matorth::cli::run_cli(argc, argv, std::cout, std::cerr); }
