#include "dampwave/cli/commands.hpp"

int main(int argc, char** argv) { return dampwave::cli::main_entry(argc, argv); }
