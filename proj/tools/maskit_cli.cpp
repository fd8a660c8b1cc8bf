#include "maskit/cli.hpp"

int main(int argc, char** argv) { return maskit::run_cli(argc, argv); }
