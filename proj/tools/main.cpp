#include "driftlap/cli.hpp"

int main(int argc, char** argv) { return driftlap::cli_run(argc, argv); }
