#include "gamow_cli.hpp"

int main(int argc, char** argv) { return gamow::cli::main_entry(argc, argv); }
