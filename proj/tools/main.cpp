#include "epiloc/cli.hpp"

int main(int argc, char** argv) { return epiloc::cli::run(argc, argv); }
