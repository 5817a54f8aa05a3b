#include <iostream>

#include "ftlab/cli.hpp"

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return ftlab::run_cli(args, std::cout, std::cerr);
}
