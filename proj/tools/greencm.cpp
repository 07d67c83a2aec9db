#include "greencm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return greencm::cli::run(argc, argv, std::cout, std::cerr); }
