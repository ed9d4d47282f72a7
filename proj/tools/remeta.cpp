#include <iostream>

#include "remeta/commands.hpp"

int main(int argc, char** argv) {
    return remeta::cli::run(argc, argv, std::cout, std::cerr);
}
