#include "symor/cli.hpp"

int main(int argc, char** argv) { return symor::cli::run(argc, argv); }
