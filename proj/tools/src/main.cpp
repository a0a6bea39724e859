#include "kkmass/cli/run.hpp"

#include <iostream>

int main(int argc, char** argv) { return kkmass::cli::cli_main(argc, argv, std::cout, std::cerr); }
