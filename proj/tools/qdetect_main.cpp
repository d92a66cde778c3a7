#include "qdetect/app/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return qdetect::app::run_cli(argc, argv, std::cout, std::cerr);
}
