#include <iostream>

#include "umap/cli.hpp"

int main(int argc, char** argv) { return umap::cli::run(argc, argv, std::cout, std::cerr); }
