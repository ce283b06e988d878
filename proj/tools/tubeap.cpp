#include "tubeap/cli.hpp"

int main(int argc, char** argv) { return tubeap::cli::main(argc, argv); }
