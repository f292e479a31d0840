#include <iostream>

#include "cstar/cli.hpp"

int main(int argc, char** argv)
{
    return cstar::run_cli(argc, argv, std::cout, std::cerr);
}
