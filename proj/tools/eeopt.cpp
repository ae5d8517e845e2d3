#include <iostream>
#include <string>
#include <vector>

#include "eeopt/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return eeopt::cli::run(args, std::cout, std::cerr);
}
