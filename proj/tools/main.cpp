#include "setbranch/cli.hpp"

int main(int argc, char** argv) { return setbranch::run_cli(argc, argv); }
