#include <iostream>

#include "gpvec/cli.hpp"

int main(int argc, char** argv)
{
    return gpvec::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
