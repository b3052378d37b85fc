#include "cli_core.hpp"

int main(int argc, char** argv) { return cadec::cli::run_cli(argc, argv); }
