#include <iostream>

#include "bwedge/cli.hpp"

int main(int argc, char** argv) { return bwedge::cli::run(argc, argv, std::cout, std::cerr); }
