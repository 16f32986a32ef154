#include <iostream>
#include <string>
#include <vector>

#include "ssclab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ssclab::cli::run(args, std::cout, std::cerr);
}
