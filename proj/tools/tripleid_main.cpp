#include <iostream>

#include "tripleid/cli.hpp"

int main(int argc, char** argv) { return tripleid::run_cli(argc, argv, std::cout, std::cerr); }
