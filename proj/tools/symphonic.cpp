#include <iostream>

#include "symphonic/cli.hpp"

int main(int argc, char** argv) { return symphonic::cli::main(argc, argv, std::cout, std::cerr); }
