#include "cli.hpp"

int main(int argc, char** argv) { return neurohome::cli::cli_main(argc, argv); }
