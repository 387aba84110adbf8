#include "numerosity/cli.hpp"

int main(int argc, char** argv) { return numerosity::run_cli(argc, argv); }
