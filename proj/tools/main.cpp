#include <iostream>

#include "em0/cli.hpp"

int main(int argc, char** argv) {
    return em0::cli::run(argc, argv, std::cout, std::cerr);
}
