#include <iostream>

#include "sipd/cli.hpp"

int main(int argc, char** argv) { return sipd::cli_main(argc, argv, std::cout, std::cerr); }
