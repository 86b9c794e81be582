#include <iostream>

#include "qgraph/commands.hpp"

int main(int argc, char** argv) { return qgraph::run_cli(argc, argv, std::cout, std::cerr); }
