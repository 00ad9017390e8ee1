#include <iostream>

#include "itermax/cli.hpp"

int main(int argc, char** argv) {
    return itermax::run_cli(argc, argv, std::cout, std::cerr);
}
