#include "tmlcost/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tmlcost::cli::run_cli(argc, argv, std::cout, std::cerr); }
