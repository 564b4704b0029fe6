#include <iostream>

#include "kmw/cli.hpp"

int main(int argc, char** argv) { return kmw::dispatch(argc, argv, std::cout, std::cerr); }
