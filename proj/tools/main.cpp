#include <iostream>

#include "alphaloss/cli.hpp"

int main(int argc, char** argv) { return alphaloss::cli::run(argc, argv, std::cout, std::cerr); }
