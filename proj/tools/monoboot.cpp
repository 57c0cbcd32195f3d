#include "monoboot/cli.hpp"

int main(int argc, char **argv) { return monoboot::cli::run_main(argc, argv); }
