#include "pnc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return pnc::cli::main_entry(argc, argv, std::cout, std::cerr); }
