#include <iostream>

#include "plap/cli/runner.hpp"

int main(int argc, char** argv) { return plap::cli::run_main(argc, argv, std::cout, std::cerr); }
