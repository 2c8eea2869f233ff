#include <iostream>

#include "pseudosieve/cli.hpp"

int main(int argc, char** argv) { return pseudosieve::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
