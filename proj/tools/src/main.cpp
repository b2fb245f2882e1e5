#include "ricci_forge_cli/cli.hpp"

int main(int argc, char** argv) { return rf::cli::run(argc, argv); }
