#include <iostream>

#include "navsim/cli.hpp"

int main(int argc, char** argv) { return navsim::dispatch(argc, argv, std::cout, std::cerr); }
