#include <iostream>

#include "censorgame/cli.hpp"

int main(int argc, char** argv) {
    return censorgame::cli::run(argc, argv, std::cout, std::cerr);
}
