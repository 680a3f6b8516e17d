#include <iostream>

#include "kpz/cli.hpp"

int main(int argc, char** argv) { return kpz::cli::run(argc, argv, std::cout, std::cerr); }
