#include "evrisk/cli.hpp"

int main(int argc, char** argv) { return evrisk::run_cli(argc, argv); }
