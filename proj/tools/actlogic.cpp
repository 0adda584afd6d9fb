#include <iostream>

#include "actlogic/cli/commands.hpp"

int main(int argc, char** argv) { return actlogic::cli::run_cli(argc, argv, std::cout, std::cerr); }
