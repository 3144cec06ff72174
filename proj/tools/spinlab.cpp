#include <spinlab/cli/run.hpp>

#include <iostream>

int main(int argc, char** argv) { return spinlab::cli::run(argc, argv, std::cout, std::cerr); }
