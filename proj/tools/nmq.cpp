#include <iostream>

#include "nmq/cli.hpp"

int main(int argc, char** argv) { return nmq::cli::run(argc, argv, std::cout, std::cerr); }
