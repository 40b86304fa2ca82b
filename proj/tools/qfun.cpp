#include "qfun/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qfun::run_cli(args, std::cout, std::cerr);
}
