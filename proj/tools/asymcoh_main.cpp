#include "asymcoh/cli.hpp"

int main(int argc, char** argv) { return asymcoh::run_cli(argc, argv); }
