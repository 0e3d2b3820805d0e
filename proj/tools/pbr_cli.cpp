#include <pbr/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return pbr::run_cli(argc, argv, std::cout, std::cerr); }
