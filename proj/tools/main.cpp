#include "betagate/cli.hpp"

int main(int argc, char** argv) { return betagate::cli_main(argc, argv); }
