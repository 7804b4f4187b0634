#include "infmax/cli.hpp"

int main(int argc, char** argv) { return infmax::run_cli(argc, argv); }
