// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "wavevol/cli.hpp"

int main(int argc, char** argv) { return wavevol::cli::run(argc, argv, std::cout, std::cerr); }
