#include "sdps/cli.hpp"

int main(int argc, char** argv) { return sdps::run_cli(argc, argv); }
