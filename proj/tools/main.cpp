#include <iostream>

#include "naimark_lab/commands.hpp"

int main(int argc, char** argv) { return naimark_lab::cli::run(argc, argv, std::cout, std::cerr); }
