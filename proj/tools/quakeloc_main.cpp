#include "quakeloc/cli.hpp"

int main(int argc, char** argv) { return quakeloc::cli::run(argc, argv); }
