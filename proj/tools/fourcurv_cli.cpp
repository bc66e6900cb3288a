#include <iostream>

#include "fourcurv/cli.hpp"

int main(int argc, char** argv) { return fourcurv::run_cli(argc, argv, std::cout, std::cerr); }
