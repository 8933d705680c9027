#include <iostream>

#include "app/commands.hpp"

int main(int argc, char** argv) { return pcr::app::run_cli(argc, argv, std::cout, std::cerr); }
