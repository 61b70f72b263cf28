#include <iostream>

#include "dcx/cli.hpp"

int main(int argc, char** argv) { return dcx::run(argc, argv, std::cout, std::cerr); }
