#include <iostream>

#include "glbfed/cli.hpp"

int main(int argc, char** argv) {
    return glbfed::run_cli(argc, argv, std::cout, std::cerr);
}
