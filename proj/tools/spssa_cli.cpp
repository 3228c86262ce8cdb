#include <iostream>
#include <string>
#include <vector>

#include "spssa/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return spssa::cli::run(args, std::cout, std::cerr);
}
