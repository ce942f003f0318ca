#include <iostream>

#include "jobs.hpp"

int main(int argc, char** argv) { return biheun::cli::run(argc, argv, std::cout, std::cerr); }
