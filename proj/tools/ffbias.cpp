#include "ffb/cli.hpp"

int main(int argc, char** argv) { return ffb::run_cli(argc, argv); }
