// SPDX-License-Identifier: MIT
#include <iostream>

#include "bqt/cli.hpp"

int main(int argc, char** argv) {
    return bqt::cli_main(argc, argv, std::cout, std::cerr);
}
