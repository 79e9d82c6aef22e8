#include <iostream>
#include <string>
#include <vector>

#include "spingap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return spingap::cli::dispatch(args, std::cout, std::cerr);
}
