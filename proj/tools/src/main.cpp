#include <iostream>

#include "corrwalk_cli/cli.hpp"

int main(int argc, char** argv) { return corrwalk::cli::run(argc, argv, std::cout, std::cerr); }
