#include "cli.hpp"

int main(int argc, char** argv) { return difren::cli::cli_dispatch(argc, argv); }
