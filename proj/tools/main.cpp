#include "momentplan/cli/commands.hpp"

int main(int argc, char** argv) { return momentplan::run_cli(argc, argv); }
