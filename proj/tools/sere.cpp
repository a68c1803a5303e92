#include <iostream>

#include "sere/cli.hpp"

int main(int argc, char** argv) { return sere::run_cli(argc, argv, std::cout, std::cerr); }
