#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return hubness::cli::run(argc, argv, std::cout, std::cerr);
}
