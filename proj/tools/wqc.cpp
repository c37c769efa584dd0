#include <iostream>

#include "wqc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wqc::cli::run(args, std::cout, std::cerr);
}
