#include "commands.hpp"

int main(int argc, char** argv) { return steptx::cli::run_cli(argc, argv); }
