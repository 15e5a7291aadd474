#include <iostream>

#include "noderank/app/commands.hpp"

int main(int argc, char** argv) { return noderank::app::run_cli(argc, argv, std::cout, std::cerr); }
