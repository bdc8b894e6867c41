#include "qboltz/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qboltz::cli::run(argc, argv, std::cout, std::cerr); }
