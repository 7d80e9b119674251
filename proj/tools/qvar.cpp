#include <iostream>

#include "qvar/cli/commands.hpp"

int main(int argc, char** argv) { return qvar::cli::run_cli(argc, argv, std::cout, std::cerr); }
