#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return spin_atlas::cli::run(argc, argv, std::cout, std::cerr); }
