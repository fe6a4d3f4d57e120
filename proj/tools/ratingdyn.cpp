#include <iostream>

#include "ratingdyn/cli/commands.hpp"

int main(int argc, char** argv) { return ratingdyn::cli::run(argc, argv, std::cout, std::cerr); }
