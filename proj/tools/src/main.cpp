#include "commands.hpp"

int main(int argc, char** argv) { return dicke::cli::main_entry(argc, argv); }
