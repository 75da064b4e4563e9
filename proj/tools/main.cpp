#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return llb::cli::run(argc, argv, std::cout, std::cerr); }
