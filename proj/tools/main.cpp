#include "geit/cli.hpp"

int main(int argc, char** argv) { return geit::cli_main(argc, argv); }
