#include <iostream>

#include "sbt/cli.hpp"

int main(int argc, char** argv) { return sbt::cli::run(argc, argv, std::cout, std::cerr); }
