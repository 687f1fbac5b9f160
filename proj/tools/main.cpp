#include "botwatch/cli.hpp"

int main(int argc, char** argv) { return botwatch::run_cli(argc, argv); }
