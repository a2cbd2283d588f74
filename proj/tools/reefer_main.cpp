#include "reefer/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return reefer::cli::run(argc, argv, std::cout, std::cerr); }
