#include "floquet_sb/commands.hpp"

int main(int argc, char** argv) { return floquet_sb::run_cli(argc, argv); }
