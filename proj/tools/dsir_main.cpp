#include "dsir/workbench.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return dsir::run_cli(args, std::cout, std::cerr);
}
