#include <iostream>

#include "gaborzak/commands.hpp"

int main(int argc, char** argv) { return gaborzak::run_cli(argc, argv, std::cout, std::cerr); }
